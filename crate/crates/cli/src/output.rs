use std::io::Write;
use std::path::Path;

use crate::failure::Failure;

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure {
            code: 1,
            message: format!("{}: {e}", p.display()),
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| if text.ends_with('\n') { Ok(()) } else { out.write_all(b"\n") })
                .map_err(|e| Failure {
                    code: 1,
                    message: format!("stdout: {e}"),
                })
        }
    }
}

pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map_err(|e| Failure::usage(e.to_string()))
}

/// `name,value` rows under a header.
pub fn name_value_csv<'a>(rows: impl IntoIterator<Item = (String, String)> + 'a) -> String {
    let mut out = String::from("name,value\n");
    for (name, value) in rows {
        out.push_str(&name);
        out.push(',');
        out.push_str(&value);
        out.push('\n');
    }
    out
}
