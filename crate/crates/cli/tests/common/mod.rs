#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

pub struct Run {
    pub code: i32,
    pub stdout: String,
}

pub fn quiddity<S: AsRef<str>>(args: &[S]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_quiddity"))
        .args(args.iter().map(AsRef::as_ref))
        .output()
        .expect("binary runs");
    Run { code: out.status.code().expect("exit code"), stdout: String::from_utf8(out.stdout).expect("utf-8") }
}

pub fn manifest_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel)
}

pub fn load_schema() -> Value {
    let text = std::fs::read_to_string(manifest_path("schema/command_result.schema.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

/// A validator for the JSON Schema keywords the result schema uses.
pub struct Validator {
    root: Value,
}

impl Validator {
    pub fn new(root: Value) -> Validator {
        Validator { root }
    }

    pub fn errors(&self, doc: &Value) -> Vec<String> {
        let mut errs = Vec::new();
        self.check(&self.root, doc, "$", &mut errs);
        errs
    }

    fn resolve(&self, reference: &str) -> &Value {
        let name = reference.strip_prefix("#/$defs/").unwrap_or_else(|| panic!("unsupported $ref {reference}"));
        &self.root["$defs"][name]
    }

    fn valid(&self, schema: &Value, doc: &Value) -> bool {
        let mut errs = Vec::new();
        self.check(schema, doc, "", &mut errs);
        errs.is_empty()
    }

    fn check(&self, schema: &Value, doc: &Value, at: &str, errs: &mut Vec<String>) {
        let Some(obj) = schema.as_object() else {
            if schema == &Value::Bool(false) {
                errs.push(format!("{at}: not allowed"));
            }
            return;
        };
        for (key, rule) in obj {
            match key.as_str() {
                "$schema" | "$id" | "title" | "$defs" | "then" => {}
                "$ref" => self.check(self.resolve(rule.as_str().unwrap()), doc, at, errs),
                "type" => {
                    let names: Vec<&str> = match rule {
                        Value::String(s) => vec![s.as_str()],
                        Value::Array(a) => a.iter().map(|v| v.as_str().unwrap()).collect(),
                        _ => panic!("bad type rule"),
                    };
                    if !names.iter().any(|n| type_matches(n, doc)) {
                        errs.push(format!("{at}: expected {names:?}, got {doc}"));
                    }
                }
                "enum" => {
                    if !rule.as_array().unwrap().contains(doc) {
                        errs.push(format!("{at}: {doc} not in {rule}"));
                    }
                }
                "const" => {
                    if rule != doc {
                        errs.push(format!("{at}: {doc} != {rule}"));
                    }
                }
                "minimum" => {
                    if doc.as_f64().is_some_and(|x| x < rule.as_f64().unwrap()) {
                        errs.push(format!("{at}: {doc} below {rule}"));
                    }
                }
                "minItems" | "maxItems" => {
                    if let Some(a) = doc.as_array() {
                        let bound = rule.as_u64().unwrap() as usize;
                        let bad = if key == "minItems" { a.len() < bound } else { a.len() > bound };
                        if bad {
                            errs.push(format!("{at}: {} items violates {key} {bound}", a.len()));
                        }
                    }
                }
                "items" => {
                    if let Some(a) = doc.as_array() {
                        for (i, item) in a.iter().enumerate() {
                            self.check(rule, item, &format!("{at}[{i}]"), errs);
                        }
                    }
                }
                "required" => {
                    if let Some(o) = doc.as_object() {
                        for name in rule.as_array().unwrap() {
                            let name = name.as_str().unwrap();
                            if !o.contains_key(name) {
                                errs.push(format!("{at}: missing {name}"));
                            }
                        }
                    }
                }
                "properties" => {
                    if let Some(o) = doc.as_object() {
                        for (name, sub) in rule.as_object().unwrap() {
                            if let Some(v) = o.get(name) {
                                self.check(sub, v, &format!("{at}.{name}"), errs);
                            }
                        }
                    }
                }
                "additionalProperties" => {
                    if let Some(o) = doc.as_object() {
                        let known = obj.get("properties").and_then(Value::as_object);
                        for (name, v) in o {
                            if !known.is_some_and(|k| k.contains_key(name)) {
                                self.check(rule, v, &format!("{at}.{name}"), errs);
                            }
                        }
                    }
                }
                "allOf" => {
                    for sub in rule.as_array().unwrap() {
                        self.check(sub, doc, at, errs);
                    }
                }
                "anyOf" => {
                    if !rule.as_array().unwrap().iter().any(|sub| self.valid(sub, doc)) {
                        errs.push(format!("{at}: no anyOf branch matches {doc}"));
                    }
                }
                "if" => {
                    if self.valid(rule, doc) {
                        if let Some(then) = obj.get("then") {
                            self.check(then, doc, at, errs);
                        }
                    }
                }
                other => panic!("unsupported keyword {other}"),
            }
        }
    }
}

fn type_matches(name: &str, v: &Value) -> bool {
    match name {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "integer" => v.is_u64() || v.is_i64(),
        "number" => v.is_number(),
        other => panic!("unknown type {other}"),
    }
}
