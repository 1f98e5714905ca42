//! Run configuration: a TOML file of flat dotted keys.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, Context, Result};
use cherednik::cherednik::CherednikAlgebra;
use cherednik::expr::{parse_polynomial, parse_scalar};
use cherednik::opalg::TwistData;
use cherednik::refgroup::{build_family, ReflectionFunction, ReflectionGroup};
use cherednik::tdo::PolyForm;
use cherednik::{FieldSpec, MultiPoly, Scalar};
use toml::Value;

#[derive(Clone, Debug)]
pub struct Bounds {
    pub degree: u32,
    pub filtration: u32,
    pub coeff_degree: u32,
    pub samples: usize,
    pub word_length: usize,
    pub max_level: u32,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub field_order: u32,
    pub prime: Option<u64>,
    pub precision: u32,
    pub family: String,
    pub rank: usize,
    pub m: u32,
    pub t: Scalar,
    pub c: Vec<Scalar>,
    pub omega: Vec<((usize, usize), MultiPoly)>,
    pub bounds: Bounds,
    pub level: (u32, u32),
    pub seed: u64,
    pub output: Option<PathBuf>,
}

/// Line of the first assignment to `key`, for diagnostics.
fn line_of(src: &str, key: &str) -> Option<usize> {
    src.lines().position(|l| {
        let l = l.trim_start();
        l.strip_prefix(key)
            .is_some_and(|rest| rest.trim_start().starts_with('='))
    })
    .map(|i| i + 1)
}

fn flatten(prefix: &str, table: &toml::Table, out: &mut BTreeMap<String, Value>) {
    for (k, v) in table {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            Value::Table(t) => flatten(&key, t, out),
            _ => {
                out.insert(key, v.clone());
            }
        }
    }
}

struct Keys<'a> {
    src: &'a str,
    path: &'a Path,
    values: BTreeMap<String, Value>,
}

impl Keys<'_> {
    fn err(&self, key: &str, msg: impl std::fmt::Display) -> anyhow::Error {
        match line_of(self.src, key) {
            Some(line) => anyhow!("{}:{line}: {key}: {msg}", self.path.display()),
            None => anyhow!("{}: {key}: {msg}", self.path.display()),
        }
    }

    fn take(&mut self, key: &str) -> Option<Value> {
        self.values.remove(key)
    }

    fn int(&mut self, key: &str, default: Option<i64>) -> Result<i64> {
        match self.take(key) {
            Some(Value::Integer(n)) => Ok(n),
            Some(other) => Err(self.err(key, format!("expected an integer, found {}", other.type_str()))),
            None => default.ok_or_else(|| self.err(key, "missing required key")),
        }
    }

    fn uint<T: TryFrom<i64>>(&mut self, key: &str, default: Option<i64>) -> Result<T> {
        let n = self.int(key, default)?;
        T::try_from(n).map_err(|_| self.err(key, format!("{n} is out of range")))
    }

    fn string(&mut self, key: &str) -> Result<Option<String>> {
        match self.take(key) {
            Some(Value::String(s)) => Ok(Some(s)),
            Some(other) => Err(self.err(key, format!("expected a string, found {}", other.type_str()))),
            None => Ok(None),
        }
    }

    fn expression(&self, key: &str, v: Value) -> Result<String> {
        match v {
            Value::Integer(n) => Ok(n.to_string()),
            Value::String(s) => Ok(s),
            other => Err(self.err(key, format!("expected a number or expression string, found {}", other.type_str()))),
        }
    }

    fn scalar(&mut self, key: &str, field_order: u32) -> Result<Option<Scalar>> {
        let Some(v) = self.take(key) else { return Ok(None) };
        let src = self.expression(key, v)?;
        parse_scalar(&src, field_order).map(Some).map_err(|e| self.err(key, e))
    }

    fn with_prefix(&mut self, prefix: &str) -> Vec<(String, Value)> {
        let keys: Vec<String> = self
            .values
            .keys()
            .filter(|k| k.starts_with(prefix))
            .cloned()
            .collect();
        keys.into_iter()
            .map(|k| {
                let v = self.values.remove(&k).unwrap();
                (k, v)
            })
            .collect()
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let src = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        RunConfig::parse(&src, path)
    }

    pub fn parse(src: &str, path: &Path) -> Result<RunConfig> {
        let table: toml::Table = toml::from_str(src).map_err(|e| anyhow!("{}: {e}", path.display()))?;
        let mut values = BTreeMap::new();
        flatten("", &table, &mut values);
        let mut k = Keys { src, path, values };

        let field_order: u32 = k.uint("field.cyclotomic_order", Some(1))?;
        if field_order == 0 {
            return Err(k.err("field.cyclotomic_order", "must be positive"));
        }
        let prime = match k.take("field.prime") {
            Some(Value::Integer(p)) if p > 1 => Some(p as u64),
            Some(other) => return Err(k.err("field.prime", format!("expected a prime, found {other}"))),
            None => None,
        };
        let precision: u32 = k.uint("field.precision", Some(8))?;
        let family = k
            .string("group.family")?
            .ok_or_else(|| k.err("group.family", "missing required key"))?;
        let rank: usize = k.uint("group.rank", Some(1))?;
        let m: u32 = k.uint("group.m", Some(2))?;
        let group = build_family(&family, rank, m, field_order).map_err(|e| k.err("group.family", e))?;
        let rank = group.rank();
        let t = k.scalar("params.t", field_order)?.unwrap_or_else(Scalar::one);
        if t.is_zero() {
            return Err(k.err("params.t", "t must be nonzero"));
        }

        let c_all = k.scalar("params.c.all", field_order)?;
        let mut c_classes = vec![];
        for (key, v) in k.with_prefix("params.c.") {
            let class: usize = key["params.c.".len()..]
                .parse()
                .map_err(|_| k.err(&key, "class keys must be integers"))?;
            let src = k.expression(&key, v)?;
            let value = parse_scalar(&src, field_order).map_err(|e| k.err(&key, e))?;
            c_classes.push((key, class, value));
        }
        let c_default = k.scalar("params.c", field_order)?;

        let mut omega = vec![];
        for (key, v) in k.with_prefix("params.omega.") {
            let parts: Vec<&str> = key["params.omega.".len()..].split('.').collect();
            let idx: Vec<usize> = parts.iter().filter_map(|p| p.parse().ok()).collect();
            if parts.len() != 2 || idx.len() != 2 || idx[0] == 0 || idx[1] == 0 || idx[0] > rank || idx[1] > rank {
                return Err(k.err(&key, format!("expected params.omega.<i>.<j> with 1 <= i, j <= {rank}")));
            }
            if idx[0] >= idx[1] {
                return Err(k.err(&key, "need i < j"));
            }
            let src = k.expression(&key, v)?;
            let f = parse_polynomial(&src, rank, field_order).map_err(|e| k.err(&key, e))?;
            omega.push(((idx[0] - 1, idx[1] - 1), f));
        }

        let bounds = Bounds {
            degree: k.uint("verify.degree", Some(4))?,
            filtration: k.uint("verify.filtration", Some(2))?,
            coeff_degree: k.uint("verify.coeff_degree", Some(2))?,
            samples: k.uint("verify.samples", Some(20))?,
            word_length: k.uint("verify.word_length", Some(2))?,
            max_level: k.uint("verify.max_level", Some(3))?,
        };
        let level = (k.uint("padic.n", Some(1))?, k.uint("padic.m", Some(0))?);
        let seed: u64 = k.uint("seed", Some(0))?;
        let output = k.string("output")?.map(PathBuf::from);

        if let Some(key) = k.values.keys().next().cloned() {
            return Err(k.err(&key, "unknown key"));
        }

        let nclasses = group.classes().len();
        let mut c = vec![c_all.or(c_default).unwrap_or_else(Scalar::zero); nclasses];
        for (key, class, value) in c_classes {
            if class >= nclasses {
                return Err(k.err(&key, format!("class {class} does not exist ({nclasses} classes)")));
            }
            c[class] = value;
        }

        Ok(RunConfig {
            field_order,
            prime,
            precision,
            family,
            rank,
            m,
            t,
            c,
            omega,
            bounds,
            level,
            seed,
            output,
        })
    }

    pub fn group(&self) -> Result<Arc<ReflectionGroup>> {
        Ok(Arc::new(build_family(&self.family, self.rank, self.m, self.field_order)?))
    }

    pub fn omega_form(&self) -> PolyForm {
        let mut w = PolyForm::zero(self.rank, 2);
        for ((i, j), f) in &self.omega {
            w.add_component(vec![*i, *j], f.clone());
        }
        w
    }

    pub fn algebra(&self) -> Result<CherednikAlgebra> {
        let group = self.group()?;
        let c = ReflectionFunction::new(&group, self.c.clone())?;
        let twist = TwistData::from_upper(self.rank, &self.omega, self.t.clone())?;
        Ok(CherednikAlgebra::new(group, c, twist)?)
    }

    pub fn field(&self) -> Result<FieldSpec> {
        let p = self
            .prime
            .ok_or_else(|| anyhow!("field.prime is required for p-adic suites"))?;
        Ok(FieldSpec::new(self.field_order, p, self.precision)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(src: &str) -> Result<RunConfig> {
        RunConfig::parse(src, Path::new("run.toml"))
    }

    #[test]
    fn minimal_config() {
        let cfg = parse("group.family = \"symmetric\"\ngroup.rank = 3\nparams.c = \"1/3\"\n").unwrap();
        assert_eq!(cfg.c, vec![Scalar::from_ratio(1, 3)]);
        assert_eq!(cfg.t, Scalar::one());
        assert!(cfg.algebra().is_ok());
    }

    #[test]
    fn per_class_values() {
        let src = "group.family = \"hyperoctahedral\"\ngroup.rank = 2\nparams.c.0 = 2\nparams.c.1 = \"-1/2\"\n";
        let cfg = parse(src).unwrap();
        assert_eq!(cfg.c, vec![Scalar::from_int(2), Scalar::from_ratio(-1, 2)]);
    }

    #[test]
    fn diagnostics_name_line_and_key() {
        let src = "group.family = \"symmetric\"\ngroup.rank = 3\nparams.c.4 = 1\n";
        let e = parse(src).unwrap_err().to_string();
        assert_eq!(e, "run.toml:3: params.c.4: class 4 does not exist (1 classes)");
        let e = parse("group.family = \"klein\"\n").unwrap_err().to_string();
        assert!(e.contains("run.toml:1: group.family: unknown family"), "{e}");
        let e = parse("group.family = \"cyclic\"\nverify.sample = 3\n").unwrap_err().to_string();
        assert_eq!(e, "run.toml:2: verify.sample: unknown key");
        let e = parse("group.family = \"cyclic\"\nparams.t = \"1/\"\n").unwrap_err().to_string();
        assert!(e.starts_with("run.toml:2: params.t: parse error"), "{e}");
    }
}
