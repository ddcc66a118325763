//! Library objects built from a resolved config.

use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use heightgap::arith::parse_rational;
use heightgap::gaplab::bianchi_at;
use heightgap::matrix::MatrixOverK;
use heightgap::mobius::{BasePoint, GElement};
use heightgap::nfield::{make_field, FieldElement, NumberField};
use heightgap::poly::Poly;
use heightgap::qalg::{make_algebra, LatticeSpec};

use crate::config::{Entry, MatrixCfg, RunConfig, Scalar};

fn rational(s: &Scalar, name: &str) -> Result<num_rational::BigRational> {
    match s {
        Scalar::Int(n) => Ok(num_rational::BigRational::from_integer((*n).into())),
        Scalar::Str(t) => parse_rational(t).ok_or_else(|| anyhow!("parse error in {name}: malformed rational {t:?}")),
    }
}

pub fn poly_from(c: &[Scalar], name: &str) -> Result<Poly> {
    let coeffs = c.iter().enumerate().map(|(i, s)| rational(s, &format!("{name}[{i}]"))).collect::<Result<Vec<_>>>()?;
    let p = Poly::new(coeffs);
    if p.degree() < 1 {
        bail!("{name}: polynomial must have degree at least 1");
    }
    Ok(p)
}

/// The field of the config: explicit, or Q(sqrt -D) for a Bianchi lattice, or Q.
pub fn field(c: &RunConfig) -> Result<Arc<NumberField>> {
    let bits = c.run.precision_bits;
    if let Some(f) = &c.field {
        let p = poly_from(&f.minpoly, "field.minpoly")?;
        return make_field(&p, bits).context("field");
    }
    if let Some(d) = c.lattice.as_ref().and_then(|l| l.bianchi) {
        return Ok(bianchi_at(d, bits).context("gaplab")?.algebra.field().clone());
    }
    if let Some(m) = &c.run.minpoly {
        return make_field(&poly_from(m, "run.minpoly")?, bits).context("field");
    }
    Ok(make_field(&Poly::from_ints(&[0, 1]), bits)?)
}

fn element(k: &Arc<NumberField>, e: &Entry, name: &str) -> Result<FieldElement> {
    match e {
        Entry::Scalar(s) => Ok(FieldElement::from_rational(k, rational(s, name)?)),
        Entry::Coeffs(v) => {
            if v.len() > k.degree() {
                bail!("{name}: {} coefficients for a field of degree {}", v.len(), k.degree());
            }
            let c = v.iter().enumerate().map(|(i, s)| rational(s, &format!("{name}[{i}]"))).collect::<Result<Vec<_>>>()?;
            Ok(FieldElement::new(k, c)?)
        }
    }
}

pub fn matrix(k: &Arc<NumberField>, m: &MatrixCfg, name: &str) -> Result<MatrixOverK> {
    if m.len() != 2 || m.iter().any(|r| r.len() != 2) {
        bail!("{name}: expected a 2x2 matrix");
    }
    let e = |r: usize, c: usize| element(k, &m[r][c], &format!("{name}[{r}][{c}]"));
    Ok(MatrixOverK::new(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?))
}

/// Matrices of the config (lattice generators or the Bianchi triple).
pub fn matrices(c: &RunConfig) -> Result<Vec<MatrixOverK>> {
    if c.lattice.as_ref().and_then(|l| l.bianchi).is_some() {
        return Ok(lattice(c)?.matrices());
    }
    let k = field(c)?;
    let gens = c.lattice.as_ref().map(|l| l.generators.clone()).unwrap_or_default();
    if gens.is_empty() {
        bail!("no matrices given: use --matrices or lattice.generators");
    }
    gens.iter().enumerate().map(|(i, m)| matrix(&k, m, &format!("lattice.generators[{i}]"))).collect()
}

pub fn lattice(c: &RunConfig) -> Result<LatticeSpec> {
    let l = c.lattice.clone().ok_or_else(|| anyhow!("a [lattice] section is required"))?;
    let hint = match &l.index_hint {
        Some(h) => Some(parse_rational(h).ok_or_else(|| anyhow!("parse error in lattice.index_hint: malformed rational {h:?}"))?),
        None => None,
    };
    if let Some(d) = l.bianchi {
        let b = bianchi_at(d, c.run.precision_bits).context("gaplab")?;
        let id = l.id.clone().unwrap_or(b.id.clone());
        return Ok(LatticeSpec::new(id, b.algebra, l.s.clone(), b.generators, hint).context("qalg")?);
    }
    let k = field(c)?;
    let a = c.algebra.clone().unwrap_or_default();
    let split = a.split_real.clone().unwrap_or_else(|| k.real_places().to_vec());
    let alg = make_algebra(&k, &a.ram_f, &split).context("qalg")?;
    let des = alg.designation().clone();
    if l.generators.is_empty() {
        bail!("lattice.generators is empty");
    }
    let gens = l
        .generators
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let name = format!("lattice.generators[{i}]");
            GElement::new(matrix(&k, m, &name)?, &des).with_context(|| name.clone())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LatticeSpec::new(l.id.clone().unwrap_or_else(|| "lattice".into()), alg, l.s.clone(), gens, hint).context("qalg")?)
}

pub fn base_point(c: &RunConfig, spec: &LatticeSpec) -> Result<BasePoint> {
    let sig = spec.algebra.signature();
    let x = match &c.run.base_point {
        None => BasePoint::center(sig),
        Some(b) => BasePoint { h2: b.h2.iter().map(|p| (p[0], p[1])).collect(), h3: b.h3.iter().map(|p| ([p[0], p[1]], p[2])).collect() },
    };
    x.validate(sig).context("run.base_point")?;
    Ok(x)
}
