//! `key = value` config files, merged into argv ahead of the command-line
//! flags so that the latter win.

use std::ffi::OsString;
use std::fs;

/// Parses config text into `(key, value)` pairs in file order.
///
/// Blank lines and `#` comments are skipped; keys may use `_` or `-`;
/// values may be wrapped in double quotes.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected `key = value`, got `{}`", n + 1, raw.trim()))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
            return Err(format!("config line {}: invalid key `{}`", n + 1, key));
        }
        let value = value.trim();
        let value = value
            .strip_prefix('"')
            .and_then(|v| v.strip_suffix('"'))
            .unwrap_or(value);
        out.push((key, value.to_string()));
    }
    Ok(out)
}

/// Removes `--config FILE` (or `--config=FILE`) from `argv` and splices the
/// file's entries in as flags directly after the subcommand words.
///
/// A `command` key supplies the subcommand when argv has none. `key = true`
/// becomes a bare `--key`; `key = false` is dropped.
pub fn merge(argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut path = None;
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        match a.to_str() {
            Some("--config") => {
                path = Some(it.next().ok_or("--config needs a file argument")?);
            }
            Some(s) if s.starts_with("--config=") => path = Some(OsString::from(&s["--config=".len()..])),
            _ => rest.push(a),
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {}: {e}", path.to_string_lossy()))?;
    Ok(splice(rest, parse(&text)?))
}

fn is_flag(a: &OsString) -> bool {
    a.to_str().is_some_and(|s| s.starts_with('-'))
}

fn splice(mut argv: Vec<OsString>, entries: Vec<(String, String)>) -> Vec<OsString> {
    let mut flags = Vec::new();
    let mut command = None;
    for (k, v) in entries {
        match (k.as_str(), v.as_str()) {
            ("command", _) => command = Some(v),
            (_, "true") => flags.push(OsString::from(format!("--{k}"))),
            (_, "false") => {}
            _ => {
                flags.push(OsString::from(format!("--{k}")));
                flags.push(OsString::from(v));
            }
        }
    }
    // `--config` is the only global flag and is gone by now, so a
    // subcommand can only sit at argv[1]
    let has_subcommand = argv.get(1).is_some_and(|a| !is_flag(a));
    if let (false, Some(c)) = (has_subcommand, command) {
        let words: Vec<OsString> = c.split_whitespace().map(OsString::from).collect();
        argv.splice(1..1, words);
    }
    let at = if argv.get(1).is_some_and(|a| !is_flag(a)) {
        argv.iter().skip(2).position(is_flag).map_or(argv.len(), |i| i + 2)
    } else {
        argv.len()
    };
    argv.splice(at..at, flags);
    argv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<OsString> {
        s.split_whitespace().map(OsString::from).collect()
    }

    fn joined(v: &[OsString]) -> String {
        v.iter().map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>().join(" ")
    }

    #[test]
    fn comments_quotes_and_underscores() {
        let text = "# point\nalpha = 0   # plate\n\nmu_range = \"1e2:1e8:log:13\"\n";
        assert_eq!(
            parse(text).unwrap(),
            vec![("alpha".into(), "0".into()), ("mu-range".into(), "1e2:1e8:log:13".into())]
        );
    }

    #[test]
    fn bad_line_is_named() {
        let e = parse("alpha = 0\nbeta 1\n").unwrap_err();
        assert!(e.contains("line 2"), "{e}");
    }

    #[test]
    fn file_flags_precede_command_line_flags() {
        let entries = parse("alpha = 1\njson = true\ncsv = false").unwrap();
        let out = splice(args("cattaneo classify --alpha 0 --beta 1"), entries);
        assert_eq!(joined(&out), "cattaneo classify --alpha 1 --json --alpha 0 --beta 1");
    }

    #[test]
    fn nested_subcommand_without_flags() {
        let out = splice(args("cattaneo preset show example1"), parse("json = true").unwrap());
        assert_eq!(joined(&out), "cattaneo preset show example1 --json");
    }

    #[test]
    fn command_key_supplies_subcommand() {
        let out = splice(args("cattaneo --beta 1/4"), parse("command = classify\nalpha = 0").unwrap());
        assert_eq!(joined(&out), "cattaneo classify --alpha 0 --beta 1/4");
        let out = splice(args("cattaneo spectrum"), parse("command = classify").unwrap());
        assert_eq!(joined(&out), "cattaneo spectrum");
    }
}
