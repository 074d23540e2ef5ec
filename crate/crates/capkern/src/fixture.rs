//! Fixture file format: a line-oriented key/value grammar with explicit
//! section headers, exact decimal integers throughout, and strict rejection
//! of unknown keys. Parsing is split from validation: `Fixture::parse`
//! builds the raw description, `Fixture::build_covering` runs every
//! module-level certificate check and returns a validated covering.

use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::capitulation::{Covering, FieldData, InfiniteRamification};
use crate::classunits::{ClassGroup, ClassGroupSpec, UnitLattice};
use crate::cohom::FiniteGroup;
use crate::matrix::Mat;
use crate::nfield::{FieldAutomorphism, FieldElement, FieldEmbedding, Ideal, NumberField, PrimeIdeal};
use crate::poly::ZPoly;
use crate::{Error, Result};

#[derive(Clone, Debug, Default)]
pub struct RawElement {
    pub num: Vec<BigInt>,
    pub den: BigInt,
}

#[derive(Clone, Debug)]
pub struct RawPrime {
    pub p: u64,
    pub gens: Vec<RawElement>,
    pub hnf: Option<Vec<BigInt>>,
    pub e: usize,
    pub f: usize,
}

#[derive(Clone, Debug, Default)]
pub struct RawField {
    pub name: String,
    pub poly: Vec<BigInt>,
    pub basis_den: BigInt,
    pub basis_rows: Vec<Vec<BigInt>>,
    pub discriminant: Option<BigInt>,
    pub signature: Option<(usize, usize)>,
}

#[derive(Clone, Debug, Default)]
pub struct RawClassGroup {
    pub primes: Vec<RawPrime>,
    pub relations: Vec<Vec<BigInt>>,
    pub witnesses: Vec<RawElement>,
}

#[derive(Clone, Debug, Default)]
pub struct RawUnits {
    pub torsion: Option<RawElement>,
    pub torsion_order: u64,
    pub fundamentals: Vec<RawElement>,
}

#[derive(Clone, Debug, Default)]
pub struct Expectations {
    pub term_orders: Option<Vec<BigInt>>,
    pub kernel_invariants: Option<Vec<BigInt>>,
    pub psi_quotient_invariants: Option<Vec<BigInt>>,
    pub h1_units_order: Option<BigInt>,
    pub unit_index: Option<BigInt>,
    pub corollary_isomorphism: Option<bool>,
}

#[derive(Clone, Debug, Default)]
pub struct Fixture {
    pub format_version: u32,
    pub name: String,
    pub base: RawField,
    pub ext: RawField,
    pub embedding_gen_image: RawElement,
    pub galois_order: usize,
    pub galois_table: Vec<Vec<usize>>,
    pub autos: Vec<(usize, RawElement)>,
    pub infinite_ramification: Option<String>,
    pub sigma_base: Vec<RawPrime>,
    pub sigma_ext: Vec<RawPrime>,
    pub classgroup_base: RawClassGroup,
    pub classgroup_ext: RawClassGroup,
    pub factorizations_base: Vec<(u64, Vec<RawPrime>)>,
    pub factorizations_ext: Vec<(u64, Vec<RawPrime>)>,
    pub units_base: RawUnits,
    pub units_ext: RawUnits,
    pub expectations: Expectations,
}

fn perr(line: usize, detail: impl Into<String>) -> Error {
    Error::ParseError { line: line + 1, detail: detail.into() }
}

fn parse_bigint(tok: &str, line: usize) -> Result<BigInt> {
    tok.parse::<BigInt>().map_err(|_| perr(line, format!("expected integer, found '{tok}'")))
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>().map_err(|_| perr(line, format!("expected count, found '{tok}'")))
}

/// Parse `<n ints> [/ <den>]`.
fn parse_element(toks: &[&str], dim: usize, line: usize) -> Result<RawElement> {
    if toks.len() < dim {
        return Err(perr(line, format!("expected {dim} coordinates")));
    }
    let num =
        toks[..dim].iter().map(|t| parse_bigint(t, line)).collect::<Result<Vec<_>>>()?;
    let den = match toks.get(dim) {
        None => BigInt::one(),
        Some(&"/") => {
            let Some(d) = toks.get(dim + 1) else {
                return Err(perr(line, "missing denominator after '/'"));
            };
            if toks.len() > dim + 2 {
                return Err(perr(line, "trailing tokens after denominator"));
            }
            parse_bigint(d, line)?
        }
        Some(t) => return Err(perr(line, format!("unexpected token '{t}'"))),
    };
    Ok(RawElement { num, den })
}

/// Parse `prime <p> (gen <coords> | hnf <d*d ints>)+ e <e> f <f>`.
fn parse_prime(toks: &[&str], dim: usize, line: usize) -> Result<RawPrime> {
    let mut it = toks.iter().peekable();
    let p = it
        .next()
        .ok_or_else(|| perr(line, "missing residue characteristic"))?
        .parse::<u64>()
        .map_err(|_| perr(line, "bad residue characteristic"))?;
    let mut gens = Vec::new();
    let mut hnf = None;
    let mut e = None;
    let mut f = None;
    while let Some(&tok) = it.next().as_ref() {
        match *tok {
            "gen" => {
                let coords: Vec<&str> = (0..dim)
                    .map(|_| it.next().copied().ok_or_else(|| perr(line, "short generator")))
                    .collect::<Result<_>>()?;
                gens.push(parse_element(&coords, dim, line)?);
            }
            "hnf" => {
                let vals: Vec<BigInt> = (0..dim * dim)
                    .map(|_| {
                        it.next()
                            .copied()
                            .ok_or_else(|| perr(line, "short hnf matrix"))
                            .and_then(|t| parse_bigint(t, line))
                    })
                    .collect::<Result<_>>()?;
                hnf = Some(vals);
            }
            "e" => {
                let t = it.next().ok_or_else(|| perr(line, "missing e value"))?;
                e = Some(parse_usize(t, line)?);
            }
            "f" => {
                let t = it.next().ok_or_else(|| perr(line, "missing f value"))?;
                f = Some(parse_usize(t, line)?);
            }
            other => return Err(perr(line, format!("unknown prime token '{other}'"))),
        }
    }
    let e = e.ok_or_else(|| perr(line, "prime is missing its ramification index e"))?;
    let f = f.ok_or_else(|| perr(line, "prime is missing its residue degree f"))?;
    if gens.is_empty() && hnf.is_none() {
        return Err(perr(line, "prime needs generators or an hnf matrix"));
    }
    Ok(RawPrime { p, gens, hnf, e, f })
}

impl Fixture {
    pub fn parse_file(path: &Path) -> Result<Fixture> {
        let text = std::fs::read_to_string(path)?;
        Fixture::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Fixture> {
        let mut fx = Fixture::default();
        let mut section = String::new();
        let mut base_dim = 0usize;
        let mut ext_dim = 0usize;
        for (ln, raw_line) in text.lines().enumerate() {
            let line = match raw_line.find('#') {
                Some(i) => &raw_line[..i],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') {
                if !line.ends_with(']') {
                    return Err(perr(ln, "unterminated section header"));
                }
                section = line[1..line.len() - 1].trim().to_string();
                let known = [
                    "field base",
                    "field ext",
                    "embedding",
                    "galois",
                    "sigma",
                    "classgroup base",
                    "classgroup ext",
                    "units base",
                    "units ext",
                    "expectations",
                ];
                let is_factorization = section.starts_with("factorization base ")
                    || section.starts_with("factorization ext ");
                if !known.contains(&section.as_str()) && !is_factorization {
                    return Err(perr(ln, format!("unknown section '[{section}]'")));
                }
                if is_factorization {
                    let parts: Vec<&str> = section.split_whitespace().collect();
                    let p = parts[2]
                        .parse::<u64>()
                        .map_err(|_| perr(ln, "bad prime in factorization header"))?;
                    if parts[1] == "base" {
                        fx.factorizations_base.push((p, Vec::new()));
                    } else {
                        fx.factorizations_ext.push((p, Vec::new()));
                    }
                }
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let key = toks[0];
            let rest = &toks[1..];
            match (section.as_str(), key) {
                ("", "format_version") => {
                    fx.format_version = rest
                        .first()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| perr(ln, "bad format_version"))?;
                }
                ("", "name") => fx.name = rest.join(" "),
                ("field base", _) | ("field ext", _) => {
                    let (field, dim) = if section == "field base" {
                        (&mut fx.base, &mut base_dim)
                    } else {
                        (&mut fx.ext, &mut ext_dim)
                    };
                    match key {
                        "name" => field.name = rest.join(" "),
                        "poly" => {
                            field.poly = rest
                                .iter()
                                .map(|t| parse_bigint(t, ln))
                                .collect::<Result<_>>()?;
                            *dim = field.poly.len().saturating_sub(1);
                        }
                        "basis_den" => {
                            field.basis_den = parse_bigint(
                                rest.first().ok_or_else(|| perr(ln, "missing basis_den"))?,
                                ln,
                            )?;
                        }
                        "basis_row" => {
                            if rest.len() != *dim {
                                return Err(perr(ln, format!("basis_row needs {dim} entries")));
                            }
                            field.basis_rows.push(
                                rest.iter().map(|t| parse_bigint(t, ln)).collect::<Result<_>>()?,
                            );
                        }
                        "discriminant" => {
                            field.discriminant = Some(parse_bigint(
                                rest.first().ok_or_else(|| perr(ln, "missing discriminant"))?,
                                ln,
                            )?);
                        }
                        "signature" => {
                            if rest.len() != 2 {
                                return Err(perr(ln, "signature needs two entries"));
                            }
                            field.signature =
                                Some((parse_usize(rest[0], ln)?, parse_usize(rest[1], ln)?));
                        }
                        other => return Err(perr(ln, format!("unknown field key '{other}'"))),
                    }
                }
                ("embedding", "gen_image") => {
                    fx.embedding_gen_image = parse_element(rest, ext_dim, ln)?;
                }
                ("galois", "order") => {
                    fx.galois_order =
                        parse_usize(rest.first().ok_or_else(|| perr(ln, "missing order"))?, ln)?;
                }
                ("galois", "table_row") => {
                    fx.galois_table.push(
                        rest.iter().map(|t| parse_usize(t, ln)).collect::<Result<_>>()?,
                    );
                }
                ("galois", "auto") => {
                    let idx = parse_usize(
                        rest.first().ok_or_else(|| perr(ln, "missing automorphism index"))?,
                        ln,
                    )?;
                    fx.autos.push((idx, parse_element(&rest[1..], ext_dim, ln)?));
                }
                ("sigma", "infinite_ramification") => {
                    fx.infinite_ramification =
                        Some(rest.first().unwrap_or(&"").to_string());
                }
                ("sigma", "base_prime") => {
                    fx.sigma_base.push(parse_prime(rest, base_dim, ln)?);
                }
                ("sigma", "ext_prime") => {
                    fx.sigma_ext.push(parse_prime(rest, ext_dim, ln)?);
                }
                ("classgroup base", "prime") => {
                    fx.classgroup_base.primes.push(parse_prime(rest, base_dim, ln)?);
                }
                ("classgroup ext", "prime") => {
                    fx.classgroup_ext.primes.push(parse_prime(rest, ext_dim, ln)?);
                }
                ("classgroup base", "relation") | ("classgroup ext", "relation") => {
                    let (cg, dim) = if section == "classgroup base" {
                        (&mut fx.classgroup_base, base_dim)
                    } else {
                        (&mut fx.classgroup_ext, ext_dim)
                    };
                    let width = cg.primes.len();
                    if rest.len() < width + 1 {
                        return Err(perr(ln, format!("relation needs {width} exponents then a witness")));
                    }
                    let exps: Vec<BigInt> = rest[..width]
                        .iter()
                        .map(|t| parse_bigint(t, ln))
                        .collect::<Result<_>>()?;
                    if rest[width] != "witness" {
                        return Err(perr(ln, "expected 'witness' after relation exponents"));
                    }
                    let w = parse_element(&rest[width + 1..], dim, ln)?;
                    cg.relations.push(exps);
                    cg.witnesses.push(w);
                }
                (s, "prime") if s.starts_with("factorization ") => {
                    let is_base = s.starts_with("factorization base");
                    let dim = if is_base { base_dim } else { ext_dim };
                    let prime = parse_prime(rest, dim, ln)?;
                    let list = if is_base {
                        &mut fx.factorizations_base
                    } else {
                        &mut fx.factorizations_ext
                    };
                    list.last_mut()
                        .ok_or_else(|| perr(ln, "prime outside factorization section"))?
                        .1
                        .push(prime);
                }
                ("units base", _) | ("units ext", _) => {
                    let (units, dim) = if section == "units base" {
                        (&mut fx.units_base, base_dim)
                    } else {
                        (&mut fx.units_ext, ext_dim)
                    };
                    match key {
                        "torsion" => {
                            // torsion <element> order <w>
                            let Some(order_pos) = rest.iter().position(|&t| t == "order") else {
                                return Err(perr(ln, "torsion line needs 'order <w>'"));
                            };
                            units.torsion = Some(parse_element(&rest[..order_pos], dim, ln)?);
                            units.torsion_order = rest
                                .get(order_pos + 1)
                                .and_then(|t| t.parse().ok())
                                .ok_or_else(|| perr(ln, "bad torsion order"))?;
                        }
                        "fund" => units.fundamentals.push(parse_element(rest, dim, ln)?),
                        other => return Err(perr(ln, format!("unknown units key '{other}'"))),
                    }
                }
                ("expectations", "term_orders") => {
                    fx.expectations.term_orders =
                        Some(rest.iter().map(|t| parse_bigint(t, ln)).collect::<Result<_>>()?);
                }
                ("expectations", "kernel_invariants") => {
                    fx.expectations.kernel_invariants =
                        Some(rest.iter().map(|t| parse_bigint(t, ln)).collect::<Result<_>>()?);
                }
                ("expectations", "psi_quotient_invariants") => {
                    fx.expectations.psi_quotient_invariants =
                        Some(rest.iter().map(|t| parse_bigint(t, ln)).collect::<Result<_>>()?);
                }
                ("expectations", "h1_units_order") => {
                    fx.expectations.h1_units_order = Some(parse_bigint(
                        rest.first().ok_or_else(|| perr(ln, "missing order"))?,
                        ln,
                    )?);
                }
                ("expectations", "unit_index") => {
                    fx.expectations.unit_index = Some(parse_bigint(
                        rest.first().ok_or_else(|| perr(ln, "missing index"))?,
                        ln,
                    )?);
                }
                ("expectations", "corollary_isomorphism") => {
                    fx.expectations.corollary_isomorphism = match rest.first() {
                        Some(&"true") => Some(true),
                        Some(&"false") => Some(false),
                        _ => return Err(perr(ln, "corollary_isomorphism must be true or false")),
                    };
                }
                (sec, other) => {
                    return Err(perr(ln, format!("unknown key '{other}' in section '[{sec}]'")));
                }
            }
        }
        if fx.format_version != 1 {
            return Err(Error::ParseError {
                line: 1,
                detail: format!("unsupported format_version {}", fx.format_version),
            });
        }
        Ok(fx)
    }

    /// Serialize back to the canonical file syntax; parse(serialize(fx))
    /// reproduces the structured content.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let push = |out: &mut String, s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        push(&mut out, format!("format_version {}", self.format_version));
        push(&mut out, format!("name {}", self.name));
        for (header, field) in [("field base", &self.base), ("field ext", &self.ext)] {
            push(&mut out, format!("\n[{header}]"));
            push(&mut out, format!("name {}", field.name));
            push(
                &mut out,
                format!("poly {}", field.poly.iter().map(BigInt::to_string).collect::<Vec<_>>().join(" ")),
            );
            push(&mut out, format!("basis_den {}", field.basis_den));
            for row in &field.basis_rows {
                push(
                    &mut out,
                    format!("basis_row {}", row.iter().map(BigInt::to_string).collect::<Vec<_>>().join(" ")),
                );
            }
            if let Some(d) = &field.discriminant {
                push(&mut out, format!("discriminant {d}"));
            }
            if let Some((r1, r2)) = field.signature {
                push(&mut out, format!("signature {r1} {r2}"));
            }
        }
        push(&mut out, "\n[embedding]".into());
        push(&mut out, format!("gen_image {}", element_str(&self.embedding_gen_image)));
        push(&mut out, "\n[galois]".into());
        push(&mut out, format!("order {}", self.galois_order));
        for row in &self.galois_table {
            push(
                &mut out,
                format!("table_row {}", row.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")),
            );
        }
        for (idx, el) in &self.autos {
            push(&mut out, format!("auto {idx} {}", element_str(el)));
        }
        push(&mut out, "\n[sigma]".into());
        if let Some(ir) = &self.infinite_ramification {
            push(&mut out, format!("infinite_ramification {ir}"));
        }
        for p in &self.sigma_base {
            push(&mut out, format!("base_prime {}", prime_str(p)));
        }
        for p in &self.sigma_ext {
            push(&mut out, format!("ext_prime {}", prime_str(p)));
        }
        for (header, cg) in [
            ("classgroup base", &self.classgroup_base),
            ("classgroup ext", &self.classgroup_ext),
        ] {
            push(&mut out, format!("\n[{header}]"));
            for p in &cg.primes {
                push(&mut out, format!("prime {}", prime_str(p)));
            }
            for (rel, w) in cg.relations.iter().zip(&cg.witnesses) {
                push(
                    &mut out,
                    format!(
                        "relation {} witness {}",
                        rel.iter().map(BigInt::to_string).collect::<Vec<_>>().join(" "),
                        element_str(w)
                    ),
                );
            }
        }
        for (side, list) in
            [("base", &self.factorizations_base), ("ext", &self.factorizations_ext)]
        {
            for (p, primes) in list {
                push(&mut out, format!("\n[factorization {side} {p}]"));
                for q in primes {
                    push(&mut out, format!("prime {}", prime_str(q)));
                }
            }
        }
        for (header, units) in [("units base", &self.units_base), ("units ext", &self.units_ext)] {
            push(&mut out, format!("\n[{header}]"));
            if let Some(t) = &units.torsion {
                push(&mut out, format!("torsion {} order {}", element_str(t), units.torsion_order));
            }
            for f in &units.fundamentals {
                push(&mut out, format!("fund {}", element_str(f)));
            }
        }
        push(&mut out, "\n[expectations]".into());
        if let Some(v) = &self.expectations.term_orders {
            push(
                &mut out,
                format!("term_orders {}", v.iter().map(BigInt::to_string).collect::<Vec<_>>().join(" ")),
            );
        }
        if let Some(v) = &self.expectations.kernel_invariants {
            push(
                &mut out,
                format!("kernel_invariants {}", v.iter().map(BigInt::to_string).collect::<Vec<_>>().join(" ")),
            );
        }
        if let Some(v) = &self.expectations.psi_quotient_invariants {
            push(
                &mut out,
                format!(
                    "psi_quotient_invariants {}",
                    v.iter().map(BigInt::to_string).collect::<Vec<_>>().join(" ")
                ),
            );
        }
        if let Some(v) = &self.expectations.h1_units_order {
            push(&mut out, format!("h1_units_order {v}"));
        }
        if let Some(v) = &self.expectations.unit_index {
            push(&mut out, format!("unit_index {v}"));
        }
        if let Some(v) = self.expectations.corollary_isomorphism {
            push(&mut out, format!("corollary_isomorphism {v}"));
        }
        out
    }
}

fn element_str(e: &RawElement) -> String {
    let coords = e.num.iter().map(BigInt::to_string).collect::<Vec<_>>().join(" ");
    if e.den.is_one() {
        coords
    } else {
        format!("{coords} / {}", e.den)
    }
}

fn prime_str(p: &RawPrime) -> String {
    let mut s = format!("{}", p.p);
    for g in &p.gens {
        s.push_str(&format!(" gen {}", element_str(g)));
    }
    if let Some(h) = &p.hnf {
        s.push_str(" hnf ");
        s.push_str(&h.iter().map(BigInt::to_string).collect::<Vec<_>>().join(" "));
    }
    s.push_str(&format!(" e {} f {}", p.e, p.f));
    s
}

/// Build parameters for validation.
#[derive(Clone, Copy, Debug)]
pub struct BuildParams {
    pub seed: u64,
    pub height_bound: i64,
    pub prec_start: u32,
    pub prec_ceiling: u32,
}

impl Default for BuildParams {
    fn default() -> Self {
        BuildParams {
            seed: 0,
            height_bound: crate::classunits::DEFAULT_HEIGHT_BOUND,
            prec_start: crate::classunits::DEFAULT_PREC_START,
            prec_ceiling: crate::classunits::DEFAULT_PREC_CEILING,
        }
    }
}

fn build_field(raw: &RawField, seed: u64) -> Result<Arc<NumberField>> {
    let d = raw.poly.len().saturating_sub(1);
    if raw.basis_rows.len() != d {
        return Err(Error::ValidationError(format!(
            "field {}: {} basis rows for degree {d}",
            raw.name,
            raw.basis_rows.len()
        )));
    }
    let basis = Mat::from_rows(raw.basis_rows.clone());
    let den = if raw.basis_den.is_one() { BigInt::one() } else { raw.basis_den.clone() };
    NumberField::new(
        &raw.name,
        ZPoly::new(raw.poly.clone()),
        basis,
        den,
        raw.discriminant.as_ref(),
        raw.signature,
        seed,
    )
}

fn build_element(field: &NumberField, raw: &RawElement) -> FieldElement {
    field.element(raw.num.clone(), raw.den.clone())
}

fn build_prime(field: &Arc<NumberField>, raw: &RawPrime) -> Result<PrimeIdeal> {
    let d = field.degree();
    let ideal = if let Some(hnf_vals) = &raw.hnf {
        let mut rows = Vec::new();
        for r in 0..d {
            rows.push(hnf_vals[r * d..(r + 1) * d].to_vec());
        }
        let ideal = Ideal::from_lattice_rows(field, Mat::from_rows(rows), BigInt::one())?;
        ideal.verify_closed(field)?;
        ideal
    } else {
        let mut gens = vec![field.from_integer(&BigInt::from(raw.p))];
        for g in &raw.gens {
            gens.push(build_element(field, g));
        }
        Ideal::from_generators(field, &gens)?
    };
    let prime = PrimeIdeal::new(ideal, raw.p, raw.f, raw.e);
    prime.verify_prime(field)?;
    // The declared ramification index must match v_P(p).
    let p_ideal = Ideal::principal(field, &field.from_integer(&BigInt::from(raw.p)))?;
    let v = prime.valuation_ideal(field, &p_ideal)?;
    if v != raw.e as i64 {
        return Err(Error::ValidationError(format!(
            "prime above {} claims e = {} but v_P(p) = {v}",
            raw.p, raw.e
        )));
    }
    Ok(prime)
}

fn build_side(
    fx_field: &RawField,
    cg: &RawClassGroup,
    sigma: &[RawPrime],
    units: &RawUnits,
    factorizations: &[(u64, Vec<RawPrime>)],
    params: &BuildParams,
) -> Result<FieldData> {
    let field = build_field(fx_field, params.seed)?;
    let factor_base: Vec<PrimeIdeal> =
        cg.primes.iter().map(|p| build_prime(&field, p)).collect::<Result<_>>()?;
    let sigma_primes: Vec<PrimeIdeal> =
        sigma.iter().map(|p| build_prime(&field, p)).collect::<Result<_>>()?;
    let relations = if cg.relations.is_empty() {
        Mat::empty(factor_base.len())
    } else {
        Mat::from_rows(cg.relations.clone())
    };
    let witnesses: Vec<FieldElement> =
        cg.witnesses.iter().map(|w| build_element(&field, w)).collect();
    let extra: Vec<(u64, Vec<PrimeIdeal>)> = factorizations
        .iter()
        .map(|(p, primes)| {
            let built: Result<Vec<PrimeIdeal>> =
                primes.iter().map(|q| build_prime(&field, q)).collect();
            Ok((*p, built?))
        })
        .collect::<Result<_>>()?;
    let class_group = ClassGroup::validate(
        field.clone(),
        ClassGroupSpec {
            factor_base,
            sigma: sigma_primes.clone(),
            relations,
            witnesses,
            extra_factorizations: extra,
        },
        params.height_bound,
        params.seed,
    )?;
    let torsion = units
        .torsion
        .as_ref()
        .ok_or_else(|| Error::ValidationError("missing torsion generator".into()))?;
    let unit_lattice = UnitLattice::validate(
        field.clone(),
        build_element(&field, torsion),
        units.torsion_order,
        units.fundamentals.iter().map(|u| build_element(&field, u)).collect(),
        sigma_primes,
        params.prec_start,
        params.prec_ceiling,
    )?;
    Ok(FieldData { field, class_group, units: unit_lattice })
}

impl Fixture {
    /// Run every validation and assemble the covering.
    pub fn build_covering(&self, params: &BuildParams) -> Result<Covering> {
        let base = build_side(
            &self.base,
            &self.classgroup_base,
            &self.sigma_base,
            &self.units_base,
            &self.factorizations_base,
            params,
        )?;
        let ext = build_side(
            &self.ext,
            &self.classgroup_ext,
            &self.sigma_ext,
            &self.units_ext,
            &self.factorizations_ext,
            params,
        )?;
        let kf = ext.field.clone();
        let embedding = FieldEmbedding::new(
            base.field.clone(),
            kf.clone(),
            build_element(&kf, &self.embedding_gen_image),
        )?;
        if self.galois_table.len() != self.galois_order {
            return Err(Error::ValidationError("galois table size mismatch".into()));
        }
        let delta = Arc::new(FiniteGroup::new(self.galois_table.clone())?);
        let mut autos = vec![None; self.galois_order];
        autos[0] = Some(FieldAutomorphism::identity(&kf));
        for (idx, el) in &self.autos {
            if *idx == 0 || *idx >= self.galois_order {
                return Err(Error::ValidationError(format!(
                    "automorphism index {idx} out of range (0 is the implicit identity)"
                )));
            }
            autos[*idx] = Some(FieldAutomorphism::new(&kf, build_element(&kf, el))?);
        }
        let autos: Vec<FieldAutomorphism> = autos
            .into_iter()
            .enumerate()
            .map(|(i, a)| {
                a.ok_or_else(|| Error::ValidationError(format!("missing automorphism {i}")))
            })
            .collect::<Result<_>>()?;
        let infinite = match self.infinite_ramification.as_deref() {
            Some("none") => InfiniteRamification::None,
            Some("allowed") => InfiniteRamification::Allowed,
            Some(other) => {
                return Err(Error::ValidationError(format!(
                    "infinite_ramification must be 'none' or 'allowed', found '{other}'"
                )))
            }
            None => {
                let (r1, _) = base.field.signature();
                if r1 > 0 {
                    return Err(Error::ValidationError(
                        "base field has real places; declare infinite_ramification".into(),
                    ));
                }
                InfiniteRamification::None
            }
        };
        Covering::validate(base, ext, embedding, delta, autos, infinite, params.seed)
    }
}
