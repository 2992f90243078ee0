//! A small interpreter for the statement files under `data/`: a subset of Macaulay2
//! assignment syntax over the polynomial grammar.
//!
//! ```text
//! ring v1, v2, ...;            declare the polynomial variables
//! adjoin p(t);                 bind ring variable t to a root of p in the field
//! name = rhs;                  bind name (not a ring variable)
//! lhs = rhs;                   record the equation lhs - rhs (lhs not a fresh name)
//! rhs := expr | ideal(expr, ...) | sub(expr, v=>expr, ...) | diff(v, expr)
//! ```
//!
//! `--` starts a comment.  Assignments are evaluated in order; later statements see
//! earlier bindings, and a name may be rebound.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::arith::{FieldElem, RingDescriptor};
use crate::poly::{parse_poly, MPoly, PolyError, VarRegistry};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

type Result<T> = std::result::Result<T, ScriptError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Poly(MPoly),
    Ideal(Vec<MPoly>),
}

#[derive(Debug, Clone)]
pub struct Script {
    ring: RingDescriptor,
    registry: Arc<VarRegistry>,
    ring_vars: Vec<String>,
    env: BTreeMap<String, Value>,
    bound_vars: BTreeMap<String, MPoly>,
    equations: Vec<(usize, String, MPoly)>,
    ideal_args: BTreeMap<String, Vec<String>>,
}

struct Stmt {
    line: usize,
    text: String,
}

fn statements(src: &str) -> Vec<Stmt> {
    let cleaned: String = src
        .lines()
        .map(|l| l.split("--").next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");
    let mut out = Vec::new();
    let mut line = 1;
    for chunk in cleaned.split(';') {
        let lead = chunk.len() - chunk.trim_start().len();
        let start = line + chunk[..lead].matches('\n').count();
        line += chunk.matches('\n').count();
        let text = chunk.trim();
        if !text.is_empty() {
            out.push(Stmt {
                line: start,
                text: text.to_string(),
            });
        }
    }
    out
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(h) if h.is_ascii_alphabetic())
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '\'')
}

/// Split on commas at parenthesis depth zero.
fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (k, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..k].trim());
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

/// `name(inner)` when the parenthesis opened after `name` closes at the very end.
fn call<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    let rest = s.strip_prefix(name)?.trim_start();
    let inner = rest.strip_prefix('(')?;
    let mut depth = 1;
    for (k, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return (k == inner.len() - 1).then(|| &inner[..k]);
                }
            }
            _ => {}
        }
    }
    None
}

impl Script {
    pub fn run(src: &str, ring: RingDescriptor) -> Result<Script> {
        let stmts = statements(src);
        let first = stmts.first().ok_or(ScriptError {
            line: 1,
            message: "empty script".into(),
        })?;
        let decl = first
            .text
            .strip_prefix("ring")
            .filter(|r| r.starts_with(char::is_whitespace))
            .ok_or(ScriptError {
                line: first.line,
                message: "the first statement must be `ring v1, v2, ...`".into(),
            })?;
        let ring_vars: Vec<String> = decl.split(',').map(|v| v.trim().to_string()).collect();
        if let Some(bad) = ring_vars.iter().find(|v| !is_ident(v)) {
            return Err(ScriptError {
                line: first.line,
                message: format!("`{bad}` is not a variable name"),
            });
        }
        let mut names = ring_vars.clone();
        for s in &stmts[1..] {
            if let Some((lhs, _)) = s.text.split_once('=') {
                let lhs = lhs.trim();
                if is_ident(lhs) && !names.iter().any(|n| n == lhs) {
                    names.push(lhs.to_string());
                }
            }
        }
        let registry = VarRegistry::new(&names).map_err(|e| ScriptError {
            line: first.line,
            message: e.to_string(),
        })?;
        let mut script = Script {
            ring,
            registry,
            ring_vars,
            env: BTreeMap::new(),
            bound_vars: BTreeMap::new(),
            equations: Vec::new(),
            ideal_args: BTreeMap::new(),
        };
        for s in &stmts[1..] {
            script.exec(s)?;
        }
        Ok(script)
    }

    fn exec(&mut self, s: &Stmt) -> Result<()> {
        if let Some(p) = s.text.strip_prefix("adjoin") {
            return self.adjoin(p.trim(), s.line);
        }
        let Some((lhs, rhs)) = s.text.split_once('=') else {
            return Err(ScriptError {
                line: s.line,
                message: "expected `name = value`".into(),
            });
        };
        let (lhs_t, rhs_t) = (lhs.trim(), rhs.trim());
        let rhs_line = s.line + lhs.matches('\n').count();
        if is_ident(lhs_t) && !self.ring_vars.iter().any(|v| v == lhs_t) {
            let v = self.eval_value(rhs_t, rhs_line)?;
            if let Some(inner) = call(rhs_t, "ideal") {
                let args = split_args(inner)
                    .into_iter()
                    .map(|a| a.split_whitespace().collect::<String>())
                    .collect();
                self.ideal_args.insert(lhs_t.to_string(), args);
            } else {
                self.ideal_args.remove(lhs_t);
            }
            self.env.insert(lhs_t.to_string(), v);
        } else {
            let l = self.eval_poly(lhs_t, s.line)?;
            let r = self.eval_poly(rhs_t, rhs_line)?;
            self.equations.push((s.line, s.text.split_whitespace().collect::<Vec<_>>().join(" "), &l - &r));
        }
        Ok(())
    }

    fn adjoin(&mut self, text: &str, line: usize) -> Result<()> {
        let p = self.eval_poly(text, line)?;
        let support: Vec<String> = p.support().iter().map(|s| s.to_string()).collect();
        let [var] = support.as_slice() else {
            return Err(ScriptError {
                line,
                message: "adjoin needs a polynomial in exactly one ring variable".into(),
            });
        };
        let elems = self.ring.elements().map_err(|e| ScriptError {
            line,
            message: e.to_string(),
        })?;
        let k = self.registry.index_of(var).expect("registered");
        let mut point = vec![FieldElem::zero(self.ring); self.registry.len()];
        let root = elems
            .into_iter()
            .find(|a| {
                point[k] = a.clone();
                p.evaluate(&point).map(|v| v.is_zero()).unwrap_or(false)
            })
            .ok_or(ScriptError {
                line,
                message: format!("{} has no root in {}", p.print(), self.ring),
            })?;
        self.bound_vars
            .insert(var.clone(), MPoly::constant(&self.registry, root));
        Ok(())
    }

    fn err(line: usize, e: PolyError) -> ScriptError {
        match e {
            PolyError::Syntax { line: l, column, message } => ScriptError {
                line: line + l - 1,
                message: format!("column {column}: {message}"),
            },
            PolyError::UnknownVariable { name, line: l, column } => ScriptError {
                line: line + l - 1,
                message: format!("column {column}: unknown name `{name}`"),
            },
            other => ScriptError {
                line,
                message: other.to_string(),
            },
        }
    }

    fn eval_value(&self, text: &str, line: usize) -> Result<Value> {
        if let Some(inner) = call(text, "ideal") {
            let gens = split_args(inner)
                .into_iter()
                .map(|a| self.eval_poly(a, line))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Value::Ideal(gens));
        }
        Ok(Value::Poly(self.eval_poly(text, line)?))
    }

    fn eval_poly(&self, text: &str, line: usize) -> Result<MPoly> {
        if let Some(inner) = call(text, "sub") {
            let args = split_args(inner);
            let base = self.eval_poly(args[0], line)?;
            let mut binds = Vec::new();
            for a in &args[1..] {
                let (v, e) = a.split_once("=>").ok_or(ScriptError {
                    line,
                    message: format!("expected `var=>value` in `{a}`"),
                })?;
                binds.push((v.trim().to_string(), self.eval_poly(e.trim(), line)?));
            }
            let refs: Vec<(&str, MPoly)> = binds.iter().map(|(v, p)| (v.as_str(), p.clone())).collect();
            return base.substitute(&refs).map_err(|e| Self::err(line, e));
        }
        if let Some(inner) = call(text, "diff") {
            let args = split_args(inner);
            if args.len() != 2 {
                return Err(ScriptError {
                    line,
                    message: "diff takes a variable and an expression".into(),
                });
            }
            let base = self.eval_poly(args[1], line)?;
            return base.partial_derivative(args[0]).map_err(|e| Self::err(line, e));
        }
        let raw = parse_poly(text, &self.registry, self.ring).map_err(|e| Self::err(line, e))?;
        self.resolve(&raw, line)
    }

    /// Replace bound names by their values; fail on names that are neither ring
    /// variables nor bound.
    fn resolve(&self, p: &MPoly, line: usize) -> Result<MPoly> {
        let mut binds: Vec<(&str, MPoly)> = Vec::new();
        for name in p.support() {
            if let Some(v) = self.bound_vars.get(name) {
                binds.push((name, v.clone()));
            } else if self.ring_vars.iter().any(|r| r == name) {
            } else {
                match self.env.get(name) {
                    Some(Value::Poly(v)) => binds.push((name, v.clone())),
                    Some(Value::Ideal(_)) => {
                        return Err(ScriptError {
                            line,
                            message: format!("`{name}` is an ideal, not a polynomial"),
                        })
                    }
                    None => {
                        return Err(ScriptError {
                            line,
                            message: format!("`{name}` is used before it is assigned"),
                        })
                    }
                }
            }
        }
        p.substitute(&binds).map_err(|e| Self::err(line, e))
    }

    pub fn ring(&self) -> RingDescriptor {
        self.ring
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.registry
    }

    pub fn ring_vars(&self) -> &[String] {
        &self.ring_vars
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.env.get(name)
    }

    pub fn poly(&self, name: &str) -> std::result::Result<MPoly, String> {
        match self.env.get(name) {
            Some(Value::Poly(p)) => Ok(p.clone()),
            Some(Value::Ideal(_)) => Err(format!("`{name}` is an ideal")),
            None => Err(format!("`{name}` is not defined")),
        }
    }

    pub fn ideal(&self, name: &str) -> std::result::Result<Vec<MPoly>, String> {
        match self.env.get(name) {
            Some(Value::Ideal(g)) => Ok(g.clone()),
            Some(Value::Poly(_)) => Err(format!("`{name}` is a polynomial")),
            None => Err(format!("`{name}` is not defined")),
        }
    }

    /// Generator texts of an ideal binding, whitespace removed.
    pub fn ideal_args(&self, name: &str) -> Option<&[String]> {
        self.ideal_args.get(name).map(Vec::as_slice)
    }

    /// Equations in source order: (line, statement text, lhs − rhs).
    pub fn equations(&self) -> &[(usize, String, MPoly)] {
        &self.equations
    }

    /// Evaluate an expression against the final bindings.
    pub fn eval(&self, text: &str) -> std::result::Result<MPoly, ScriptError> {
        self.eval_poly(text, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_bindings() {
        let s = Script::run(
            "ring x, y;\n a = x+1; b = a^2; a = y; c = a*b;\n x = 2*y;",
            RingDescriptor::f7(),
        )
        .unwrap();
        assert_eq!(s.poly("b").unwrap().print(), "x^2+2*x+1");
        assert_eq!(s.poly("c").unwrap().print(), "x^2*y+2*x*y+y");
        assert_eq!(s.equations().len(), 1);
        assert_eq!(s.equations()[0].2.print(), "x+5*y");
    }

    #[test]
    fn functions_and_adjoin() {
        let s = Script::run(
            "ring t, x;\nadjoin t^2+1;\n g = (1+x)^2;\n dg = diff(x, g);\n v = sub(dg, x=>t);\n I = ideal(v-1, sub(sub(g, x=>x-t), x=>0));",
            RingDescriptor::f49(),
        )
        .unwrap();
        assert_eq!(s.poly("v").unwrap().print(), "(2+2*i)");
        let i = s.ideal("I").unwrap();
        assert_eq!(i.len(), 2);
        assert_eq!(i[1].print(), "5*i");
    }

    #[test]
    fn errors_carry_lines() {
        let e = Script::run("ring x;\n\n a = x +* 1;", RingDescriptor::f7()).unwrap_err();
        assert_eq!(e.line, 3);
        let e = Script::run("ring x;\n a = b + 1;\n b = x;", RingDescriptor::f7()).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("before it is assigned"));
        assert!(Script::run("a = 1;", RingDescriptor::f7()).is_err());
        let e = Script::run("ring t;\nadjoin t^2+1;", RingDescriptor::f7()).unwrap_err();
        assert!(e.message.contains("no root"));
    }
}
