use std::thread;

use cgf_core::bfs::{concrete_verdict, raster_points, resolve_with_oracle, Stage};
use cgf_core::{Rational, Result, SliceSpec, Verdict};

/// Exact verdict at one point of the slice (free coordinates).
pub fn classify_point(spec: &SliceSpec, point: &[Rational], stage: Stage, oracle: bool) -> Result<Verdict> {
    let full = spec.full_point(point);
    let v = concrete_verdict(spec.family, &full, stage)?;
    if oracle {
        resolve_with_oracle(spec.family, &full, v)
    } else {
        Ok(v)
    }
}

/// Verdicts at the `n × n` pixel centers of a two-dimensional slice, first
/// coordinate fastest, rows from the low end of the second coordinate.
pub fn classify_pixels(spec: &SliceSpec, n: usize, stage: Stage, oracle: bool) -> Result<Vec<Verdict>> {
    assert_eq!(spec.dim(), 2, "raster plots need two free parameters");
    let points = raster_points(spec, n);
    let workers = thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(points.len().max(1));
    let chunk = points.len().div_ceil(workers).max(1);
    let parts: Vec<Result<Vec<Verdict>>> = thread::scope(|s| {
        let handles: Vec<_> = points
            .chunks(chunk)
            .map(|ps| s.spawn(move || ps.iter().map(|p| classify_point(spec, p, stage, oracle)).collect()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("classification worker panicked")).collect()
    });
    let mut out = Vec::with_capacity(points.len());
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}
