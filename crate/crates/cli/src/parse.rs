//! Value parsers for flags.

use bayes_core::Distribution;

/// Nonnegative integer flag; scientific notation such as `5e4` is accepted.
pub fn count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v <= 9.007_199_254_740_992e15 => Ok(v as u64),
        _ => Err(format!("`{s}` is not a nonnegative integer")),
    }
}

pub fn size(s: &str) -> Result<usize, String> {
    count(s).map(|v| v as usize)
}

/// A list-valued flag; a newtype so clap treats it as one value.
#[derive(Clone, Debug, PartialEq)]
pub struct Values(pub Vec<f64>);

impl std::ops::Deref for Values {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

pub fn grid_values(s: &str) -> Result<Values, String> {
    grid(s).map(Values)
}

pub fn list_values(s: &str) -> Result<Values, String> {
    list(s).map(Values)
}

/// `lo:hi:step` or a comma-separated list.
pub fn grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad number `{p}` in grid `{s}`")))
            .collect::<Result<_, _>>()?;
        let (lo, hi, step) = (nums[0], nums[1], nums[2]);
        if !(step > 0.0 && hi >= lo) {
            return Err(format!("grid `{s}` needs lo <= hi and step > 0"));
        }
        let n = ((hi - lo) / step + 1e-9).floor() as usize;
        if n > 100_000 {
            return Err(format!("grid `{s}` has too many points"));
        }
        // k * step rather than repeated addition keeps the values clean
        return Ok((0..=n).map(|k| round12(lo + k as f64 * step)).collect());
    }
    list(s)
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

pub fn list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad number `{p}` in list `{s}`")))
        .collect()
}

/// `name(arg, ...)` into its parts.
fn call(s: &str) -> Result<(String, Vec<f64>), String> {
    let s = s.trim();
    let open = s.find('(').ok_or_else(|| format!("expected name(args), got `{s}`"))?;
    if !s.ends_with(')') {
        return Err(format!("expected name(args), got `{s}`"));
    }
    let name = s[..open].trim().to_ascii_lowercase();
    let inner = &s[open + 1..s.len() - 1];
    let args = if inner.trim().is_empty() { Vec::new() } else { list(inner)? };
    Ok((name, args))
}

fn arity(name: &str, args: &[f64], n: usize) -> Result<(), String> {
    if args.len() != n {
        return Err(format!("{name} takes {n} arguments, got {}", args.len()));
    }
    Ok(())
}

/// Distribution written as `beta(5,9)`, `normal(0,1)`, `gamma(2,1)`,
/// `inverse-gamma(3,2)`, `uniform(0,1)` or `student-t(5,0,1)`.
pub fn distribution(s: &str) -> Result<Distribution, String> {
    let (name, a) = call(s)?;
    let d = match name.as_str() {
        "beta" => arity(&name, &a, 2).and_then(|_| Distribution::beta(a[0], a[1]).map_err(|e| e.to_string())),
        "normal" => arity(&name, &a, 2).and_then(|_| Distribution::normal(a[0], a[1]).map_err(|e| e.to_string())),
        "gamma" => arity(&name, &a, 2).and_then(|_| Distribution::gamma(a[0], a[1]).map_err(|e| e.to_string())),
        "inverse-gamma" => {
            arity(&name, &a, 2).and_then(|_| Distribution::inverse_gamma(a[0], a[1]).map_err(|e| e.to_string()))
        }
        "uniform" => arity(&name, &a, 2).and_then(|_| Distribution::uniform(a[0], a[1]).map_err(|e| e.to_string())),
        "student-t" => {
            arity(&name, &a, 3).and_then(|_| Distribution::student_t(a[0], a[1], a[2]).map_err(|e| e.to_string()))
        }
        other => Err(format!(
            "unknown distribution `{other}` (expected beta, normal, gamma, inverse-gamma, uniform or student-t)"
        )),
    }?;
    Ok(d)
}

/// Prior for model comparison: `beta(a,b)`, `normal(m,s)` or `point(p)`.
#[derive(Clone, Debug, PartialEq)]
pub enum PriorArg {
    Beta(f64, f64),
    Normal(f64, f64),
    Point(f64),
}

pub fn prior(s: &str) -> Result<PriorArg, String> {
    let (name, a) = call(s)?;
    match name.as_str() {
        "beta" => arity(&name, &a, 2).map(|_| PriorArg::Beta(a[0], a[1])),
        "normal" => arity(&name, &a, 2).map(|_| PriorArg::Normal(a[0], a[1])),
        "point" => arity(&name, &a, 1).map(|_| PriorArg::Point(a[0])),
        other => Err(format!("unknown prior `{other}` (expected beta(a,b), normal(m,s) or point(p))")),
    }
}

/// `name=value`.
pub fn assignment(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v = v.trim().parse::<f64>().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}
