//! Lossless JSON and CSV dumps of [`StencilTables`] and [`LprTables`].
//!
//! Every coefficient is written as an exact `(numerator, denominator)` pair.
//! In JSON each integer is a number when it fits in an `i64` and a decimal
//! string otherwise. In CSV each coefficient cell holds `p/q` text.

use std::io::{Read, Write};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exact::{self, RatMatrix, Rational};
use crate::stencil::{Classification, IdealWeights, LprTables, Sampling, StencilTables};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Parse(format!("unknown table format {other:?}"))),
        }
    }
}

/// Either kind of table, as recovered by [`import_tables`].
#[derive(Debug, Clone, PartialEq)]
pub enum AnyTables {
    Stencil(StencilTables),
    Lpr(LprTables),
}

impl From<StencilTables> for AnyTables {
    fn from(t: StencilTables) -> Self {
        AnyTables::Stencil(t)
    }
}

impl From<LprTables> for AnyTables {
    fn from(t: LprTables) -> Self {
        AnyTables::Lpr(t)
    }
}

pub fn export_tables<W: Write>(tables: &AnyTables, format: Format, out: W) -> Result<()> {
    match format {
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &to_json(tables))?;
            out.write_all(b"\n")?;
            Ok(())
        }
        Format::Csv => write_csv(tables, out),
    }
}

pub fn export_to_string(tables: &AnyTables, format: Format) -> Result<String> {
    let mut buf = Vec::new();
    export_tables(tables, format, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

pub fn import_tables<R: Read>(format: Format, input: R) -> Result<AnyTables> {
    match format {
        Format::Json => {
            let v: Value = serde_json::from_reader(input)?;
            from_json(&v)
        }
        Format::Csv => read_csv(input),
    }
}

// ---- JSON -----------------------------------------------------------------

fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

fn pair(q: &Rational) -> Value {
    json!([int_value(q.numer()), int_value(q.denom())])
}

fn vec_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(pair).collect())
}

fn mat_json(m: &RatMatrix) -> Value {
    Value::Array(m.iter().map(|row| vec_json(row)).collect())
}

fn to_json(tables: &AnyTables) -> Value {
    let (base, lpr) = match tables {
        AnyTables::Stencil(t) => (t, None),
        AnyTables::Lpr(l) => (l.base(), Some(l)),
    };
    let mut m = Map::new();
    m.insert("r".into(), Value::from(base.r() as u64));
    m.insert("tau_num".into(), int_value(base.tau().numer()));
    m.insert("tau_den".into(), int_value(base.tau().denom()));
    m.insert("sampling".into(), Value::from(base.sampling().to_string()));
    m.insert("sub_eval".into(), mat_json(base.sub_eval()));
    m.insert("full_eval".into(), vec_json(base.full_eval()));
    m.insert(
        "smooth_forms".into(),
        Value::Array(base.smooth_forms().iter().map(mat_json).collect()),
    );
    m.insert(
        "ideal".into(),
        base.ideal()
            .weights
            .as_deref()
            .map_or(Value::Null, vec_json),
    );
    m.insert(
        "classification".into(),
        Value::from(base.ideal().classification.to_string()),
    );
    if let Some(l) = lpr {
        m.insert("c_ext".into(), vec_json(l.c_ext()));
        m.insert("p_ext_eval".into(), vec_json(l.p_ext_eval()));
        m.insert("q_ext".into(), mat_json(l.q_ext()));
    }
    Value::Object(m)
}

fn bad(what: &str) -> Error {
    Error::Parse(format!("malformed table document: {what}"))
}

fn int_from(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| bad("non-integer number")),
        Value::String(s) => s.parse().map_err(|_| bad("integer string")),
        _ => Err(bad("expected integer")),
    }
}

fn rational_from(v: &Value) -> Result<Rational> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| bad("pair"))?;
    let den = int_from(&arr[1])?;
    if den == BigInt::from(0) {
        return Err(Error::DivisionByZero("zero denominator in table".into()));
    }
    Ok(Rational::new(int_from(&arr[0])?, den))
}

fn vec_from(v: &Value) -> Result<Vec<Rational>> {
    v.as_array()
        .ok_or_else(|| bad("vector"))?
        .iter()
        .map(rational_from)
        .collect()
}

fn mat_from(v: &Value) -> Result<RatMatrix> {
    v.as_array()
        .ok_or_else(|| bad("matrix"))?
        .iter()
        .map(vec_from)
        .collect()
}

fn parse_sampling(s: &str) -> Result<Sampling> {
    match s {
        "cell-averages" => Ok(Sampling::CellAverages),
        "point-values" => Ok(Sampling::PointValues),
        _ => Err(bad("sampling")),
    }
}

fn parse_classification(s: &str) -> Result<Classification> {
    match s {
        "convex" => Ok(Classification::Convex),
        "signed" => Ok(Classification::Signed),
        "singular" => Ok(Classification::Singular),
        _ => Err(bad("classification")),
    }
}

fn field<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    m.get(key).ok_or_else(|| bad(key))
}

fn from_json(v: &Value) -> Result<AnyTables> {
    let m = v.as_object().ok_or_else(|| bad("top level"))?;
    let r = field(m, "r")?.as_u64().ok_or_else(|| bad("r"))? as usize;
    let tau = {
        let num = int_from(field(m, "tau_num")?)?;
        let den = int_from(field(m, "tau_den")?)?;
        if den == BigInt::from(0) {
            return Err(Error::DivisionByZero("tau_den".into()));
        }
        Rational::new(num, den)
    };
    let sampling = match m.get("sampling") {
        Some(s) => parse_sampling(s.as_str().ok_or_else(|| bad("sampling"))?)?,
        None => Sampling::CellAverages,
    };
    let ideal = match field(m, "ideal")? {
        Value::Null => None,
        other => Some(vec_from(other)?),
    };
    let classification = parse_classification(
        field(m, "classification")?
            .as_str()
            .ok_or_else(|| bad("classification"))?,
    )?;
    let smooth_forms = field(m, "smooth_forms")?
        .as_array()
        .ok_or_else(|| bad("smooth_forms"))?
        .iter()
        .map(mat_from)
        .collect::<Result<Vec<_>>>()?;
    let base = StencilTables {
        r,
        tau,
        sampling,
        sub_eval: mat_from(field(m, "sub_eval")?)?,
        full_eval: vec_from(field(m, "full_eval")?)?,
        smooth_forms,
        ideal: IdealWeights {
            weights: ideal,
            classification,
        },
    };
    check_shapes(&base)?;
    if m.contains_key("c_ext") {
        let lpr = LprTables {
            base,
            c_ext: vec_from(field(m, "c_ext")?)?,
            p_ext_eval: vec_from(field(m, "p_ext_eval")?)?,
            q_ext: mat_from(field(m, "q_ext")?)?,
        };
        check_lpr_shapes(&lpr)?;
        Ok(AnyTables::Lpr(lpr))
    } else {
        Ok(AnyTables::Stencil(base))
    }
}

fn check_shapes(t: &StencilTables) -> Result<()> {
    let r = t.r;
    let square = |m: &RatMatrix, n: usize| m.len() == n && m.iter().all(|row| row.len() == n);
    let ok = r >= 1
        && square(&t.sub_eval, r + 1)
        && t.full_eval.len() == 2 * r + 1
        && t.smooth_forms.len() == r + 1
        && t.smooth_forms.iter().all(|q| square(q, r + 1))
        && t.ideal.weights.as_ref().is_none_or(|w| w.len() == r + 1);
    ok.then_some(()).ok_or_else(|| bad("table shapes"))
}

fn check_lpr_shapes(l: &LprTables) -> Result<()> {
    let n = 2 * l.base.r + 1;
    let ok = l.c_ext.len() == l.base.r + 2
        && l.p_ext_eval.len() == n
        && l.q_ext.len() == n
        && l.q_ext.iter().all(|row| row.len() == n);
    ok.then_some(()).ok_or_else(|| bad("LPR table shapes"))
}

// ---- CSV ------------------------------------------------------------------

fn write_csv<W: Write>(tables: &AnyTables, out: W) -> Result<()> {
    let (base, lpr) = match tables {
        AnyTables::Stencil(t) => (t, None),
        AnyTables::Lpr(l) => (l.base(), Some(l)),
    };
    let width = 2 * base.r() + 1;
    let mut rows: Vec<Vec<String>> = Vec::new();
    let meta = |key: &str, value: String| vec!["meta".to_string(), key.to_string(), value];
    rows.push(meta("r", base.r().to_string()));
    rows.push(meta("tau", exact::format_rational(base.tau())));
    rows.push(meta("sampling", base.sampling().to_string()));
    rows.push(meta(
        "classification",
        base.ideal().classification.to_string(),
    ));
    let push_row = |rows: &mut Vec<Vec<String>>, section: &str, idx: usize, v: &[Rational]| {
        let mut row = vec![section.to_string(), idx.to_string()];
        row.extend(v.iter().map(exact::format_rational));
        rows.push(row);
    };
    for (i, row) in base.sub_eval().iter().enumerate() {
        push_row(&mut rows, "sub_eval", i, row);
    }
    push_row(&mut rows, "full_eval", 0, base.full_eval());
    for (i, q) in base.smooth_forms().iter().enumerate() {
        for (a, row) in q.iter().enumerate() {
            push_row(&mut rows, &format!("smooth_form_{i}"), a, row);
        }
    }
    if let Some(w) = &base.ideal().weights {
        push_row(&mut rows, "ideal", 0, w);
    }
    if let Some(l) = lpr {
        push_row(&mut rows, "c_ext", 0, l.c_ext());
        push_row(&mut rows, "p_ext_eval", 0, l.p_ext_eval());
        for (a, row) in l.q_ext().iter().enumerate() {
            push_row(&mut rows, "q_ext", a, row);
        }
    }

    let cols = 2 + width.max(l_width(lpr));
    let mut wtr = csv::Writer::from_writer(out);
    let mut header = vec!["section".to_string(), "index".to_string()];
    header.extend((0..cols - 2).map(|c| format!("c{c}")));
    wtr.write_record(&header)?;
    for mut row in rows {
        row.resize(cols, String::new());
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

fn l_width(lpr: Option<&LprTables>) -> usize {
    lpr.map_or(0, |l| l.c_ext().len())
}

fn read_csv<R: Read>(input: R) -> Result<AnyTables> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut r = None;
    let mut tau = None;
    let mut sampling = Sampling::CellAverages;
    let mut classification = None;
    let mut sub_eval = Vec::new();
    let mut full_eval = None;
    let mut forms: Vec<RatMatrix> = Vec::new();
    let mut ideal = None;
    let mut c_ext = None;
    let mut p_ext_eval = None;
    let mut q_ext = Vec::new();

    for rec in rdr.records() {
        let rec = rec?;
        let section = rec.get(0).unwrap_or_default();
        let index = rec.get(1).unwrap_or_default();
        let cells: Vec<&str> = rec.iter().skip(2).filter(|c| !c.is_empty()).collect();
        let coeffs = || -> Result<Vec<Rational>> {
            cells.iter().map(|c| exact::parse_rational(c)).collect()
        };
        match section {
            "meta" => {
                let value = cells.first().copied().ok_or_else(|| bad("meta value"))?;
                match index {
                    "r" => r = Some(value.parse::<usize>().map_err(|_| bad("r"))?),
                    "tau" => tau = Some(exact::parse_rational(value)?),
                    "sampling" => sampling = parse_sampling(value)?,
                    "classification" => classification = Some(parse_classification(value)?),
                    _ => return Err(bad("meta key")),
                }
            }
            "sub_eval" => sub_eval.push(coeffs()?),
            "full_eval" => full_eval = Some(coeffs()?),
            "ideal" => ideal = Some(coeffs()?),
            "c_ext" => c_ext = Some(coeffs()?),
            "p_ext_eval" => p_ext_eval = Some(coeffs()?),
            "q_ext" => q_ext.push(coeffs()?),
            s if s.starts_with("smooth_form_") => {
                let i: usize = s["smooth_form_".len()..]
                    .parse()
                    .map_err(|_| bad("smooth form index"))?;
                if forms.len() <= i {
                    forms.resize_with(i + 1, Vec::new);
                }
                forms[i].push(coeffs()?);
            }
            _ => return Err(bad("section")),
        }
    }

    let base = StencilTables {
        r: r.ok_or_else(|| bad("r"))?,
        tau: tau.ok_or_else(|| bad("tau"))?,
        sampling,
        sub_eval,
        full_eval: full_eval.ok_or_else(|| bad("full_eval"))?,
        smooth_forms: forms,
        ideal: IdealWeights {
            weights: ideal,
            classification: classification.ok_or_else(|| bad("classification"))?,
        },
    };
    check_shapes(&base)?;
    match (c_ext, p_ext_eval) {
        (Some(c_ext), Some(p_ext_eval)) => {
            let lpr = LprTables {
                base,
                c_ext,
                p_ext_eval,
                q_ext,
            };
            check_lpr_shapes(&lpr)?;
            Ok(AnyTables::Lpr(lpr))
        }
        (None, None) => Ok(AnyTables::Stencil(base)),
        _ => Err(bad("incomplete LPR sections")),
    }
}
