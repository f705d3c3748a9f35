//! `--config FILE`: a TOML table whose keys are long flag names. Entries become
//! flags placed right after the subcommand words; flags given on the command
//! line take precedence.

use toml::Value;

pub fn expand(mut argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(pos) = argv.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(argv);
    };
    let path = match argv[pos].strip_prefix("--config=") {
        Some(p) => {
            let p = p.to_string();
            argv.remove(pos);
            p
        }
        None => {
            if pos + 1 >= argv.len() {
                return Err("--config needs a file path".into());
            }
            argv.remove(pos);
            argv.remove(pos)
        }
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let table: toml::Table = text.parse().map_err(|e| format!("config {path}: {e}"))?;
    let given: Vec<String> = argv
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a).to_string())
        .collect();
    let mut flags = Vec::new();
    for (key, value) in &table {
        let name = key.replace('_', "-");
        if given.contains(&name) {
            continue;
        }
        match value {
            Value::Boolean(true) => flags.push(format!("--{name}")),
            Value::Boolean(false) => {}
            Value::Array(items) => {
                flags.push(format!("--{name}"));
                for v in items {
                    flags.push(scalar(v).ok_or_else(|| format!("config key {key}: unsupported array item"))?);
                }
            }
            v => {
                flags.push(format!("--{name}"));
                flags.push(scalar(v).ok_or_else(|| format!("config key {key}: unsupported value"))?);
            }
        }
    }
    let words = 1 + argv.iter().skip(1).take_while(|a| !a.starts_with('-')).count();
    argv.splice(words..words, flags);
    Ok(argv)
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Integer(i) => Some(i.to_string()),
        Value::Float(f) => Some(f.to_string()),
        _ => None,
    }
}
