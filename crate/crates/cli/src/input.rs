//! Polynomial inputs: literal text or JSON, files, and named builtins.

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use discres_core::genform::{buse_witness, generic_form, GenericForm};
use discres_core::{Poly, VarTable};

#[derive(Args, Debug, Clone, Default)]
pub struct Inputs {
    /// Polynomial in the text grammar or its JSON form (repeatable)
    #[arg(long = "poly")]
    pub polys: Vec<String>,
    /// File holding one polynomial per line, or one JSON document (repeatable)
    #[arg(long = "file")]
    pub files: Vec<std::path::PathBuf>,
    /// Builtin input: generic:n,d | buse-witness:d | remark
    #[arg(long)]
    pub builtin: Option<String>,
    /// Leading variables of the table, comma separated
    #[arg(long)]
    pub vars: Option<String>,
    /// Rename generic-form parameters to single letters
    #[arg(long)]
    pub letters: bool,
}

/// A resolved input; `x_vars` is known for builtins.
pub struct Loaded {
    pub polys: Vec<Poly>,
    pub x_vars: Option<Vec<String>>,
}

pub const REMARK: &str = "x*y + y^2 + x*z + y*z + k*z^2";

pub fn parse_builtin(spec: &str, letters: bool) -> Result<(Poly, Vec<String>)> {
    let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
    match name {
        "generic" => {
            let (n, d) = arg
                .split_once(',')
                .ok_or_else(|| anyhow!("expected generic:n,d, got `{spec}`"))?;
            let form = generic_form(n.trim().parse()?, d.trim().parse()?)?;
            let form = if letters { form.with_letters()? } else { form };
            Ok(form_parts(&form))
        }
        "buse-witness" => {
            let d: u32 = arg.trim().parse().context("expected buse-witness:d")?;
            Ok((buse_witness(d)?, vec!["x".into(), "y".into(), "z".into()]))
        }
        "remark" => {
            let table = VarTable::new(["x", "y", "z", "k"])?;
            Ok((
                Poly::parse(REMARK, Some(&table))?,
                vec!["x".into(), "y".into(), "z".into()],
            ))
        }
        _ => bail!("unknown builtin `{spec}`"),
    }
}

fn form_parts(form: &GenericForm) -> (Poly, Vec<String>) {
    (form.body().clone(), form.x_vars().to_vec())
}

fn parse_one(text: &str, table: Option<&VarTable>) -> Result<Poly> {
    let text = text.trim();
    if text.starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let p = Poly::from_json(&value)?;
        return Ok(match table {
            Some(t) => p.embed(&t.merge(p.vars())),
            None => p,
        });
    }
    Ok(Poly::parse(text, table)?)
}

impl Inputs {
    pub fn load(&self) -> Result<Loaded> {
        let mut table = match &self.vars {
            Some(v) => Some(VarTable::new(v.split(',').map(str::trim).filter(|s| !s.is_empty()))?),
            None => None,
        };
        let mut polys = Vec::new();
        let mut x_vars = None;
        if let Some(b) = &self.builtin {
            let (p, x) = parse_builtin(b, self.letters)?;
            table = Some(match table {
                Some(t) => t.merge(p.vars()),
                None => p.vars().clone(),
            });
            polys.push(p);
            x_vars = Some(x);
        }
        let mut texts: Vec<String> = self.polys.clone();
        for f in &self.files {
            let content = std::fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?;
            if content.trim_start().starts_with('{') {
                texts.push(content);
            } else {
                texts.extend(content.lines().filter(|l| !l.trim().is_empty()).map(str::to_string));
            }
        }
        for text in &texts {
            let p = parse_one(text, table.as_ref())?;
            table = Some(p.vars().clone());
            polys.push(p);
        }
        if polys.is_empty() {
            bail!("no input: pass --poly, --file or --builtin");
        }
        // all inputs share the final table
        let t = table.unwrap();
        let polys = polys.into_iter().map(|p| p.embed(&t.merge(p.vars()))).collect();
        Ok(Loaded { polys, x_vars })
    }

    pub fn single(&self) -> Result<(Poly, Option<Vec<String>>)> {
        let loaded = self.load()?;
        if loaded.polys.len() != 1 {
            bail!("expected exactly one input polynomial, got {}", loaded.polys.len());
        }
        Ok((loaded.polys.into_iter().next().unwrap(), loaded.x_vars))
    }
}
