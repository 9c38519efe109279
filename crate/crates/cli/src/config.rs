//! `key = value` configuration files mirrored onto command-line flags.

use std::path::Path;

/// Reads `key = value` lines (blank lines and `#` comments ignored) as flags.
///
/// `true`/`false` values toggle switches: `true` becomes `--key`, `false` is dropped.
pub fn read_config(path: &Path) -> Result<Vec<String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn parse_config(text: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", k + 1))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key.is_empty() || key.starts_with('-') {
            return Err(format!("line {}: bad key {key:?}", k + 1));
        }
        match value {
            "true" => out.push(format!("--{key}")),
            "false" => {}
            _ => out.push(format!("--{key}={value}")),
        }
    }
    Ok(out)
}

/// Removes `--config PATH` / `--config=PATH` from `args`, returning the path.
pub fn take_config_path(args: &mut Vec<String>) -> Result<Option<String>, String> {
    let Some(i) = args.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(None);
    };
    let path = if let Some(p) = args[i].strip_prefix("--config=") {
        let p = p.to_string();
        args.remove(i);
        p
    } else {
        if i + 1 >= args.len() {
            return Err("--config requires a path".into());
        }
        args.remove(i);
        args.remove(i)
    };
    if args.iter().any(|a| a == "--config" || a.starts_with("--config=")) {
        return Err("--config given more than once".into());
    }
    Ok(Some(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_become_flags() {
        let f = parse_config("# comment\ng = 6\n\nx_max=12 # trailing\noracle = true\nsummary = false\n").unwrap();
        assert_eq!(f, ["--g=6", "--x-max=12", "--oracle"]);
        assert!(parse_config("g 6").is_err());
        assert!(parse_config("--g = 6").is_err());
    }

    #[test]
    fn config_path_is_extracted() {
        let mut a: Vec<String> = ["hjwell", "split", "--config", "c.txt", "--g", "4"].map(String::from).to_vec();
        assert_eq!(take_config_path(&mut a).unwrap().as_deref(), Some("c.txt"));
        assert_eq!(a, ["hjwell", "split", "--g", "4"]);
        let mut b: Vec<String> = ["hjwell", "--config=c.txt", "split"].map(String::from).to_vec();
        assert_eq!(take_config_path(&mut b).unwrap().as_deref(), Some("c.txt"));
        let mut c: Vec<String> = ["hjwell", "split", "--config"].map(String::from).to_vec();
        assert!(take_config_path(&mut c).is_err());
    }
}
