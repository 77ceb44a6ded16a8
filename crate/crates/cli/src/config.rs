//! `--config file.json`: every key becomes a flag, inserted right after the
//! subcommand so that flags given on the command line take precedence.

use std::ffi::OsString;

use serde_json::Value;

pub const SUBCOMMANDS: [&str; 7] = ["check-algebra", "factorize", "gn", "triangle", "rotate", "phase", "sumrule"];

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

fn flag_tokens(key: &str, value: &Value) -> Result<Vec<OsString>, String> {
    let flag = format!("--{}", key.replace('_', "-"));
    let scalar = |v: &Value| match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        other => Err(format!("config key '{key}': unsupported value {other}")),
    };
    Ok(match value {
        Value::Null | Value::Bool(false) => vec![],
        Value::Bool(true) => vec![flag.into()],
        Value::Array(items) => {
            let joined = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?.join(",");
            vec![flag.into(), joined.into()]
        }
        Value::Object(_) => return Err(format!("config key '{key}': nested objects are not flags")),
        v => vec![flag.into(), scalar(v)?.into()],
    })
}

/// Expands the config file, if any, into the argument list.
pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config {}: {e}", path.to_string_lossy()))?;
    let json: Value = serde_json::from_str(&text)
        .map_err(|e| format!("config {} is not valid JSON: {e}", path.to_string_lossy()))?;
    let Value::Object(map) = json else {
        return Err("config must be a JSON object".into());
    };

    let mut args = args;
    let mut pos = args.iter().position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()));
    if let Some(cmd) = map.get("command") {
        let Value::String(cmd) = cmd else {
            return Err("config key 'command' must be a string".into());
        };
        if pos.is_none() {
            args.insert(1, cmd.into());
            pos = Some(1);
        }
    }
    let Some(pos) = pos else {
        return Err("no subcommand on the command line or in the config".into());
    };
    let mut tokens = Vec::new();
    for (key, value) in &map {
        if key == "command" || key == "config" {
            continue;
        }
        tokens.extend(flag_tokens(key, value)?);
    }
    args.splice(pos + 1..pos + 1, tokens);
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_for_each_kind() {
        assert_eq!(flag_tokens("k_max", &Value::from(16)).unwrap(), vec![OsString::from("--k-max"), "16".into()]);
        assert_eq!(flag_tokens("recursion", &Value::from(true)).unwrap(), vec![OsString::from("--recursion")]);
        assert!(flag_tokens("recursion", &Value::from(false)).unwrap().is_empty());
        assert_eq!(
            flag_tokens("y", &serde_json::json!([0.1, 0.2])).unwrap(),
            vec![OsString::from("--y"), "0.1,0.2".into()]
        );
        assert!(flag_tokens("x", &serde_json::json!({"a": 1})).is_err());
    }

    #[test]
    fn no_config_is_identity() {
        let args: Vec<OsString> = vec!["ladder".into(), "gn".into(), "--n".into(), "1".into()];
        assert_eq!(expand(args.clone()).unwrap(), args);
    }
}
