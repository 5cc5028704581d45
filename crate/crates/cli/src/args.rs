use cgf_core::{Family, Rational, SliceSpec};

/// A command-line problem, reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

pub fn rational(s: &str) -> Result<Rational, UsageError> {
    s.trim().parse().or_else(|_| usage(format!("not a rational number: {s:?}")))
}

pub fn family(name: &str) -> Result<Family, UsageError> {
    Family::from_name(name).or_else(|_| {
        let known: Vec<&str> = Family::all().map(|f| f.name()).collect();
        usage(format!("unknown family {name:?} (known: {})", known.join(", ")))
    })
}

/// Comma- or whitespace-separated rationals.
pub fn rational_list(s: &str) -> Result<Vec<Rational>, UsageError> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(rational).collect()
}

/// `name=value`.
pub fn fix(s: &str) -> Result<(String, Rational), UsageError> {
    let Some((name, value)) = s.split_once('=') else {
        return usage(format!("expected name=value, got {s:?}"));
    };
    Ok((name.trim().to_string(), rational(value)?))
}

/// `name=lo..hi`.
pub fn free(s: &str) -> Result<(String, Rational, Rational), UsageError> {
    let Some((name, range)) = s.split_once('=') else {
        return usage(format!("expected name=lo..hi, got {s:?}"));
    };
    let Some((lo, hi)) = range.split_once("..") else {
        return usage(format!("expected name=lo..hi, got {s:?}"));
    };
    Ok((name.trim().to_string(), rational(lo)?, rational(hi)?))
}

/// Parameter values from positional arguments or `--params`, checked against
/// the family's arity.
pub fn params(family: Family, positional: &[String], flag: Option<&str>) -> Result<Vec<Rational>, UsageError> {
    let mut values = Vec::new();
    for p in positional {
        values.extend(rational_list(p)?);
    }
    if let Some(flag) = flag {
        values.extend(rational_list(flag)?);
    }
    let names = family.params();
    if values.len() != names.len() {
        return usage(format!(
            "{} takes {} parameters ({}), got {}",
            family.name(),
            names.len(),
            names.join(", "),
            values.len()
        ));
    }
    Ok(values)
}

pub fn slice(family: Family, fixes: &[String], frees: &[String]) -> Result<SliceSpec, UsageError> {
    let fixes: Vec<(String, Rational)> = fixes.iter().map(|s| fix(s)).collect::<Result<_, _>>()?;
    let frees: Vec<(String, Rational, Rational)> = frees.iter().map(|s| free(s)).collect::<Result<_, _>>()?;
    let fixed: Vec<(&str, Rational)> = fixes.iter().map(|(n, v)| (n.as_str(), v.clone())).collect();
    let free: Vec<(&str, Rational, Rational)> = frees.iter().map(|(n, l, h)| (n.as_str(), l.clone(), h.clone())).collect();
    SliceSpec::new(family, &fixed, &free).map_err(|e| UsageError(e.to_string()))
}

/// A slice with every parameter free in a unit box around `point`, or fixed
/// when named in `fixes`; returns the spec and the free coordinates of
/// `point`.
pub fn slice_around(family: Family, point: &[Rational], fixes: &[String]) -> Result<(SliceSpec, Vec<Rational>), UsageError> {
    let fixes: Vec<(String, Rational)> = fixes.iter().map(|s| fix(s)).collect::<Result<_, _>>()?;
    let one = Rational::one();
    let mut fixed = Vec::new();
    let mut free = Vec::new();
    let mut local = Vec::new();
    let mut rest = point.iter();
    for &name in family.params() {
        if let Some((_, v)) = fixes.iter().find(|(n, _)| n == name) {
            fixed.push((name, v.clone()));
        } else {
            let Some(x) = rest.next() else {
                return usage(format!("missing value for {name}"));
            };
            free.push((name, x - &one, x + &one));
            local.push(x.clone());
        }
    }
    if rest.next().is_some() {
        return usage("too many parameter values");
    }
    let spec = SliceSpec::new(family, &fixed, &free).map_err(|e| UsageError(e.to_string()))?;
    Ok((spec, local))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags() {
        assert_eq!(fix("f=4/5").unwrap(), ("f".to_string(), Rational::new(4, 5)));
        let (n, lo, hi) = free("b=0..1/2").unwrap();
        assert_eq!((n.as_str(), lo, hi), ("b", Rational::zero(), Rational::new(1, 2)));
        assert!(free("b=0-1").is_err());
        assert_eq!(rational_list("1/12, 2/12").unwrap(), vec![Rational::new(1, 12), Rational::new(1, 6)]);
        assert!(rational("x").is_err());
    }

    #[test]
    fn arity() {
        let fam = family("drlm_backward_3_slope").unwrap();
        assert!(params(fam, &["1/12".into()], None).is_err());
        assert_eq!(params(fam, &["1/12".into()], Some("2/12")).unwrap().len(), 2);
        assert!(family("nope").is_err());
    }

    #[test]
    fn slices() {
        let fam = Family::GjForward3Slope;
        let s = slice(fam, &["f=4/5".into()], &["lambda_1=0..1".into(), "lambda_2=0..1".into()]).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(slice(fam, &["f=4/5".into()], &["lambda_1=0..1".into()]).is_err());
        let (s, local) = slice_around(fam, &[Rational::new(1, 3), Rational::new(2, 3)], &["f=4/5".into()]).unwrap();
        assert_eq!(s.free_names(), vec!["lambda_1", "lambda_2"]);
        assert_eq!(local.len(), 2);
    }
}
