//! Line-oriented germ files.
//!
//! ```text
//! # comment
//! function P(x, y, z) = x^2 + y^2 + z^3
//! germ cusp(y) = (y^2, y^3)
//! unfolding cusp_opsu(y; l) of cusp = (y^2, y^3 + l*y)
//! germ A(t, x, y, z) = (t^3 + P*t, x, y, z)
//! @ cusp simple=true codim=1 source="Bruce-Gaffney"
//!
//! family k = 1..4
//! germ S_{k}(y, z) = (y^2, y^3 + z^{k+1}*y, z)
//! @ S_{k} codim={k} formula="k"
//! end
//! ```
//!
//! A function name used inside a later expression stands for that function,
//! carried over by variable name. Inside a `family` block every `{expr}` is
//! replaced by the integer value of `expr` for each value of the parameter.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::germ::{MapGerm, Unfolding};
use crate::parse::{parse_poly_with, split_tuple};
use crate::poly::{Polynomial, Role, VarContext};

#[derive(Clone, Debug, Default)]
pub struct GermFile {
    functions: Vec<(String, Polynomial)>,
    germs: Vec<(String, MapGerm)>,
    unfoldings: Vec<(String, Unfolding)>,
    meta: Vec<(String, Vec<(String, String)>)>,
}

impl GermFile {
    pub fn parse(text: &str) -> Result<GermFile> {
        let mut file = GermFile::default();
        for (line, content) in expand_families(text)? {
            file.parse_line(&content).map_err(|e| match e {
                Error::GermFile { .. } => e,
                other => Error::GermFile { line, msg: other.to_string() },
            })?;
        }
        Ok(file)
    }

    pub fn function(&self, name: &str) -> Option<&Polynomial> {
        self.functions.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    pub fn germ(&self, name: &str) -> Option<&MapGerm> {
        self.germs.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    pub fn unfolding(&self, name: &str) -> Option<&Unfolding> {
        self.unfoldings.iter().find(|(n, _)| n == name).map(|(_, u)| u)
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, &Polynomial)> {
        self.functions.iter().map(|(n, p)| (n.as_str(), p))
    }

    /// Germs in file order.
    pub fn germs(&self) -> impl Iterator<Item = (&str, &MapGerm)> {
        self.germs.iter().map(|(n, g)| (n.as_str(), g))
    }

    pub fn unfoldings(&self) -> impl Iterator<Item = (&str, &Unfolding)> {
        self.unfoldings.iter().map(|(n, u)| (n.as_str(), u))
    }

    /// `key=value` annotations attached to `name`, in file order.
    pub fn meta(&self, name: &str) -> &[(String, String)] {
        self.meta.iter().find(|(n, _)| n == name).map(|(_, m)| m.as_slice()).unwrap_or(&[])
    }

    pub fn meta_value(&self, name: &str, key: &str) -> Option<&str> {
        self.meta(name).iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn is_defined(&self, name: &str) -> bool {
        self.function(name).is_some() || self.germ(name).is_some() || self.unfolding(name).is_some()
    }

    fn parse_line(&mut self, line: &str) -> Result<()> {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return Ok(());
        }
        if let Some(rest) = line.strip_prefix('@') {
            return self.parse_meta(rest);
        }
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match keyword {
            "function" => self.parse_function(rest),
            "germ" => self.parse_germ(rest),
            "unfolding" => self.parse_unfolding(rest),
            _ => Err(Error::Precondition(format!("unknown directive `{keyword}`"))),
        }
    }

    fn resolver<'a>(&'a self, ctx: &'a Arc<VarContext>) -> impl Fn(&str) -> Option<Polynomial> + 'a {
        move |name: &str| {
            if ctx.index_of(name).is_some() {
                return None;
            }
            self.function(name).and_then(|p| p.to_context(ctx).ok())
        }
    }

    fn parse_function(&mut self, rest: &str) -> Result<()> {
        let (head, body) = split_definition(rest)?;
        let (name, vars) = parse_head(head)?;
        self.check_new(&name)?;
        let ctx = VarContext::uniform(&vars, Role::Augmenting)?;
        let p = parse_poly_with(body, &ctx, self.resolver(&ctx))?;
        self.functions.push((name, p));
        Ok(())
    }

    fn parse_germ(&mut self, rest: &str) -> Result<()> {
        let (head, body) = split_definition(rest)?;
        let (name, vars) = parse_head(head)?;
        self.check_new(&name)?;
        let ctx = VarContext::uniform(&vars, Role::Source)?;
        let comps = split_tuple(body)?
            .iter()
            .map(|c| parse_poly_with(c, &ctx, self.resolver(&ctx)))
            .collect::<Result<Vec<_>>>()?;
        let g = MapGerm::new(&ctx, comps)?.with_name(name.clone());
        self.germs.push((name, g));
        Ok(())
    }

    fn parse_unfolding(&mut self, rest: &str) -> Result<()> {
        let (head, body) = split_definition(rest)?;
        let (head, base_name) = head
            .rsplit_once(" of ")
            .ok_or_else(|| Error::Precondition("expected `unfolding NAME(x; l) of BASE = (...)`".into()))?;
        let base_name = base_name.trim();
        let base = self
            .germ(base_name)
            .ok_or_else(|| Error::Precondition(format!("unknown germ `{base_name}`")))?
            .clone();
        let (name, vars) = parse_head(head)?;
        self.check_new(&name)?;
        let joined = vars.join(",");
        let (xs, ls) = joined
            .split_once(';')
            .ok_or_else(|| Error::Precondition("separate source variables from parameters with `;`".into()))?;
        let xs: Vec<&str> = xs.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let ls: Vec<&str> = ls.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        if xs != base.ctx().names().iter().map(String::as_str).collect::<Vec<_>>() {
            return Err(Error::NotAnUnfoldingOf(format!(
                "source variables ({}) differ from those of `{base_name}`",
                xs.join(", ")
            )));
        }
        let pctx = VarContext::uniform(&ls, Role::Parameter)?;
        let ctx = base.ctx().join(&pctx)?;
        let comps = split_tuple(body)?
            .iter()
            .map(|c| parse_poly_with(c, &ctx, self.resolver(&ctx)))
            .collect::<Result<Vec<_>>>()?;
        let u = Unfolding::new(&base, &ls, comps)?;
        self.unfoldings.push((name, u));
        Ok(())
    }

    fn parse_meta(&mut self, rest: &str) -> Result<()> {
        let tokens = tokenize_meta(rest)?;
        let (name, pairs) = tokens.split_first().ok_or_else(|| Error::Precondition("`@` needs a name".into()))?;
        if !self.is_defined(name) {
            return Err(Error::Precondition(format!("annotation for undefined name `{name}`")));
        }
        let mut kv = Vec::new();
        for t in pairs {
            let (k, v) = t.split_once('=').ok_or_else(|| Error::Precondition(format!("expected key=value, found `{t}`")))?;
            kv.push((k.to_string(), v.to_string()));
        }
        match self.meta.iter_mut().find(|(n, _)| n == name) {
            Some((_, m)) => m.extend(kv),
            None => self.meta.push((name.clone(), kv)),
        }
        Ok(())
    }

    fn check_new(&self, name: &str) -> Result<()> {
        if self.is_defined(name) {
            return Err(Error::Precondition(format!("`{name}` is defined twice")));
        }
        Ok(())
    }
}

fn split_definition(rest: &str) -> Result<(&str, &str)> {
    let (head, body) = rest.split_once('=').ok_or_else(|| Error::Precondition("expected `=`".into()))?;
    Ok((head.trim(), body.trim()))
}

/// `NAME(a, b; c)` into the name and the raw argument list.
fn parse_head(head: &str) -> Result<(String, Vec<String>)> {
    let open = head.find('(').ok_or_else(|| Error::Precondition(format!("expected `NAME(vars)`, found `{head}`")))?;
    let name = head[..open].trim();
    let args = head[open + 1..]
        .trim_end()
        .strip_suffix(')')
        .ok_or_else(|| Error::Precondition(format!("unclosed variable list in `{head}`")))?;
    if name.is_empty() || name.contains(char::is_whitespace) {
        return Err(Error::Precondition(format!("invalid name `{name}`")));
    }
    let vars: Vec<String> = if args.contains(';') {
        vec![args.to_string()]
    } else {
        args.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
    };
    Ok((name.to_string(), vars))
}

fn tokenize_meta(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    for c in s.chars() {
        match c {
            '"' => quoted = !quoted,
            c if c.is_whitespace() && !quoted => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if quoted {
        return Err(Error::Precondition("unterminated quote".into()));
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

/// Flattens `family` blocks into numbered lines.
fn expand_families(text: &str) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    let mut block: Option<(usize, String, i64, i64, Vec<(usize, String)>)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if let Some(rest) = trimmed.strip_prefix("family ") {
            if block.is_some() {
                return Err(Error::GermFile { line, msg: "family blocks do not nest".into() });
            }
            let (var, range) = parse_family_head(rest).map_err(|msg| Error::GermFile { line, msg })?;
            block = Some((line, var, range.0, range.1, Vec::new()));
        } else if trimmed == "end" {
            let Some((_, var, lo, hi, lines)) = block.take() else {
                return Err(Error::GermFile { line, msg: "`end` without `family`".into() });
            };
            for value in lo..=hi {
                for (l, text) in &lines {
                    let expanded = interpolate(text, &var, value).map_err(|msg| Error::GermFile { line: *l, msg })?;
                    out.push((*l, expanded));
                }
            }
        } else if let Some((_, _, _, _, lines)) = block.as_mut() {
            lines.push((line, raw.to_string()));
        } else {
            out.push((line, raw.to_string()));
        }
    }
    if let Some((line, ..)) = block {
        return Err(Error::GermFile { line, msg: "family block is never closed".into() });
    }
    Ok(out)
}

fn parse_family_head(rest: &str) -> std::result::Result<(String, (i64, i64)), String> {
    let (var, range) = rest.split_once('=').ok_or("expected `family VAR = LO..HI`")?;
    let (lo, hi) = range.trim().split_once("..").ok_or("expected a range `LO..HI`")?;
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad range start `{lo}`"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad range end `{hi}`"))?;
    let var = var.trim();
    if !crate::poly::is_identifier(var) {
        return Err(format!("`{var}` is not a valid family parameter"));
    }
    if lo > hi {
        return Err("empty family range".into());
    }
    Ok((var.to_string(), (lo, hi)))
}

/// Replaces each `{expr}` by its integer value at `var = value`.
fn interpolate(text: &str, var: &str, value: i64) -> std::result::Result<String, String> {
    let ctx = VarContext::uniform(&[var], Role::Parameter).map_err(|e| e.to_string())?;
    let mut out = String::new();
    let mut rest = text;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = rest[open..].find('}').ok_or("unclosed `{`")? + open;
        let expr = &rest[open + 1..close];
        let p = Polynomial::parse(expr, &ctx).map_err(|e| format!("in `{{{expr}}}`: {e}"))?;
        let v = p.eval(&[crate::Rat::from_int(value)]);
        let n = v.to_i64().filter(|_| v.is_integer()).ok_or(format!("`{{{expr}}}` is not an integer"))?;
        out.push_str(&n.to_string());
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# a sample
function P(x, y, z) = x^2 + y^2 + z^3
germ cusp(y) = (y^2, y^3)
unfolding cusp_opsu(y; l) of cusp = (y^2, y^3 + l*y)
germ A(t, x, y, z) = (t^3 + P*t, x, y, z)
@ cusp simple=true codim=1 source=\"Bruce and Gaffney\"

family k = 1..3
germ S_{k}(y, z) = (y^2, y^3 + z^{k+1}*y, z)
@ S_{k} codim={k} formula=\"k\"
end
";

    #[test]
    fn parses_sample() {
        let f = GermFile::parse(SAMPLE).unwrap();
        assert_eq!(f.germ("cusp").unwrap().to_string(), "(y^2, y^3)");
        assert_eq!(f.unfolding("cusp_opsu").unwrap().m(), 1);
        assert_eq!(f.germ("A").unwrap().components()[0].num_terms(), 4);
        assert_eq!(f.meta_value("cusp", "source"), Some("Bruce and Gaffney"));
        assert_eq!(f.germ("S_3").unwrap().to_string(), "(y^2, y*z^4 + y^3, z)");
        assert_eq!(f.meta_value("S_2", "codim"), Some("2"));
        assert_eq!(f.germs().count(), 5);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "germ a(y) = (y^2)\ngerm b(y) = (y^2, y + 1)\n";
        match GermFile::parse(bad) {
            Err(Error::GermFile { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(GermFile::parse("germ a(y) = (Q*y)"), Err(Error::GermFile { line: 1, .. })));
        assert!(GermFile::parse("germ a(y) = (y^2)\ngerm a(y) = (y^3)").is_err());
        assert!(GermFile::parse("family k = 1..2\ngerm a_{k}(y) = (y^2)\n").is_err());
        assert!(GermFile::parse("unfolding u(y; l) of nothing = (y^2)").is_err());
        assert!(GermFile::parse("@ ghost simple=true").is_err());
    }

    #[test]
    fn unfolding_variables_must_match_base() {
        let text = "germ c(y) = (y^2, y^3)\nunfolding u(t; l) of c = (t^2, t^3 + l*t)\n";
        assert!(matches!(GermFile::parse(text), Err(Error::GermFile { line: 2, .. })));
    }

    #[test]
    fn interpolation() {
        assert_eq!(interpolate("z^{2*k+1} and {k-1}", "k", 3).unwrap(), "z^7 and 2");
        assert!(interpolate("{k/2}", "k", 3).is_err());
    }
}
