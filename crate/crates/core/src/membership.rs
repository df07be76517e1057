//! Piecewise-linear membership functions.
//!
//! Triangles, shoulders and trapezoids are all stored the same way: an
//! increasing list of `(x, degree)` breakpoints plus the constant degree used
//! to the left of the first node and to the right of the last one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMembership", into = "RawMembership")]
pub struct MembershipFunction {
    nodes: Vec<(f64, f64)>,
    left_tail: f64,
    right_tail: f64,
}

#[derive(Serialize, Deserialize)]
struct RawMembership {
    nodes: Vec<[f64; 2]>,
    left_tail: f64,
    right_tail: f64,
}

impl TryFrom<RawMembership> for MembershipFunction {
    type Error = Error;

    fn try_from(raw: RawMembership) -> Result<Self> {
        let nodes = raw.nodes.into_iter().map(|[x, y]| (x, y)).collect();
        MembershipFunction::new(nodes, raw.left_tail, raw.right_tail)
    }
}

impl From<MembershipFunction> for RawMembership {
    fn from(mf: MembershipFunction) -> Self {
        RawMembership {
            nodes: mf.nodes.iter().map(|&(x, y)| [x, y]).collect(),
            left_tail: mf.left_tail,
            right_tail: mf.right_tail,
        }
    }
}

fn check_degree(what: &str, y: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::InvalidMembership(format!(
            "{what} degree {y} outside [0, 1]"
        )));
    }
    Ok(())
}

impl MembershipFunction {
    /// Validates and builds a function from breakpoints and tail degrees.
    pub fn new(nodes: Vec<(f64, f64)>, left_tail: f64, right_tail: f64) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidMembership("no breakpoints".into()));
        }
        check_degree("left tail", left_tail)?;
        check_degree("right tail", right_tail)?;
        for (i, &(x, y)) in nodes.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::InvalidMembership(format!(
                    "breakpoint {i} has non-finite x"
                )));
            }
            check_degree(&format!("breakpoint {i}"), y)?;
        }
        if let Some(w) = nodes.windows(2).find(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidMembership(format!(
                "breakpoint x values must strictly increase ({} then {})",
                w[0].0, w[1].0
            )));
        }
        Ok(Self {
            nodes,
            left_tail,
            right_tail,
        })
    }

    /// Triangle rising from `a`, peaking at `b`, falling to `c`; zero outside.
    pub fn triangle(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(vec![(a, 0.0), (b, 1.0), (c, 0.0)], 0.0, 0.0)
    }

    /// Left shoulder: 1 up to `a`, falling linearly to 0 at `b`.
    pub fn left_shoulder(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![(a, 1.0), (b, 0.0)], 1.0, 0.0)
    }

    /// Right shoulder: 0 up to `a`, rising linearly to 1 at `b`.
    pub fn right_shoulder(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![(a, 0.0), (b, 1.0)], 0.0, 1.0)
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    pub fn left_tail(&self) -> f64 {
        self.left_tail
    }

    pub fn right_tail(&self) -> f64 {
        self.right_tail
    }

    /// Smallest and largest breakpoint x.
    pub fn node_range(&self) -> (f64, f64) {
        (self.nodes[0].0, self.nodes[self.nodes.len() - 1].0)
    }

    /// Closed interval where the function can be non-zero, if bounded.
    ///
    /// `None` on a side means the corresponding tail is positive.
    pub fn support(&self) -> (Option<f64>, Option<f64>) {
        let lo = if self.left_tail > 0.0 {
            None
        } else {
            let first_positive = self.nodes.iter().position(|&(_, y)| y > 0.0);
            Some(match first_positive {
                Some(0) | None => self.nodes[0].0,
                Some(i) => self.nodes[i - 1].0,
            })
        };
        let hi = if self.right_tail > 0.0 {
            None
        } else {
            let last_positive = self.nodes.iter().rposition(|&(_, y)| y > 0.0);
            let n = self.nodes.len();
            Some(match last_positive {
                Some(i) if i + 1 < n => self.nodes[i + 1].0,
                _ => self.nodes[n - 1].0,
            })
        };
        (lo, hi)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::NonFinite(x));
        }
        Ok(self.eval_finite(x))
    }

    fn eval_finite(&self, x: f64) -> f64 {
        let (first, last) = self.node_range();
        if x < first {
            return self.left_tail;
        }
        if x > last {
            return self.right_tail;
        }
        // index of the first node with node.x >= x
        let i = self.nodes.partition_point(|&(nx, _)| nx < x);
        let (x1, y1) = self.nodes[i];
        if x1 == x {
            return y1;
        }
        let (x0, y0) = self.nodes[i - 1];
        let t = (x - x0) / (x1 - x0);
        (y0 + t * (y1 - y0)).clamp(0.0, 1.0)
    }

    /// `n` evenly spaced samples over `[lo, hi]`, both ends included.
    pub fn sample_curve(&self, lo: f64, hi: f64, n: usize) -> Result<Vec<(f64, f64)>> {
        let xs = sample_points(lo, hi, n)?;
        Ok(xs.into_iter().map(|x| (x, self.eval_finite(x))).collect())
    }
}

/// Evenly spaced abscissae shared by every curve sampled over the same range.
pub fn sample_points(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidSampling("bounds must be finite".into()));
    }
    if lo >= hi {
        return Err(Error::InvalidSampling(format!(
            "lower bound {lo} must be below upper bound {hi}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidSampling(format!(
            "need at least 2 samples, got {n}"
        )));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect())
}

/// Writes samples as `x,degree` CSV.
pub fn write_curve_csv<W: std::io::Write>(samples: &[(f64, f64)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["x", "degree"]).map_err(io)?;
    for &(x, y) in samples {
        w.write_record([format!("{x:.6}"), format!("{y:.6}")])
            .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn old() -> MembershipFunction {
        MembershipFunction::right_shoulder(50.0, 65.0).unwrap()
    }

    fn mild() -> MembershipFunction {
        MembershipFunction::triangle(30.0, 45.0, 60.0).unwrap()
    }

    #[test]
    fn evaluates_reference_points() {
        assert_eq!(old().eval(82.0).unwrap(), 1.0);
        assert!((mild().eval(49.0).unwrap() - 11.0 / 15.0).abs() < 1e-12);
        let leptin_high = MembershipFunction::triangle(40.0, 55.0, 70.0).unwrap();
        assert_eq!(leptin_high.eval(10.0).unwrap(), 0.0);
        let insulin_normal = MembershipFunction::triangle(3.0, 6.5, 10.0).unwrap();
        assert!((insulin_normal.eval(5.66).unwrap() - 0.76).abs() < 1e-12);
    }

    #[test]
    fn node_values_are_exact() {
        assert_eq!(mild().eval(45.0).unwrap(), 1.0);
        assert_eq!(mild().eval(30.0).unwrap(), 0.0);
        assert_eq!(old().eval(65.0).unwrap(), 1.0);
    }

    #[test]
    fn tails_apply_outside_nodes() {
        let child = MembershipFunction::left_shoulder(5.0, 15.0).unwrap();
        assert_eq!(child.eval(0.0).unwrap(), 1.0);
        assert_eq!(child.eval(40.0).unwrap(), 0.0);
        assert_eq!(old().eval(-3.0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_non_finite_input() {
        assert!(matches!(old().eval(f64::NAN), Err(Error::NonFinite(_))));
        assert!(old().eval(f64::INFINITY).is_err());
    }

    #[test]
    fn construction_errors() {
        assert!(MembershipFunction::new(vec![(50.0, 0.0), (65.0, 1.0)], 0.0, 1.0).is_ok());
        assert!(MembershipFunction::new(vec![(5.0, 1.0), (5.0, 0.0)], 1.0, 0.0).is_err());
        assert!(MembershipFunction::new(vec![(0.0, 1.5)], 0.0, 0.0).is_err());
        assert!(MembershipFunction::new(vec![], 0.0, 0.0).is_err());
        assert!(MembershipFunction::new(vec![(0.0, 0.5)], -0.1, 0.0).is_err());
        assert!(MembershipFunction::new(vec![(1.0, 0.5), (0.0, 0.5)], 0.0, 0.0).is_err());
    }

    #[test]
    fn single_node_function() {
        let mf = MembershipFunction::new(vec![(2.0, 0.5)], 0.0, 1.0).unwrap();
        assert_eq!(mf.eval(1.0).unwrap(), 0.0);
        assert_eq!(mf.eval(2.0).unwrap(), 0.5);
        assert_eq!(mf.eval(3.0).unwrap(), 1.0);
    }

    #[test]
    fn support_bounds() {
        assert_eq!(mild().support(), (Some(30.0), Some(60.0)));
        assert_eq!(old().support(), (Some(50.0), None));
        let child = MembershipFunction::left_shoulder(5.0, 15.0).unwrap();
        assert_eq!(child.support(), (None, Some(15.0)));
    }

    #[test]
    fn sample_curve_endpoints() {
        let s = old().sample_curve(50.0, 65.0, 2).unwrap();
        assert_eq!(s, vec![(50.0, 0.0), (65.0, 1.0)]);
    }

    #[test]
    fn sample_curve_matches_direct_evaluation() {
        let child = MembershipFunction::left_shoulder(5.0, 15.0).unwrap();
        let s = child.sample_curve(0.0, 20.0, 5).unwrap();
        let xs: Vec<f64> = s.iter().map(|p| p.0).collect();
        assert_eq!(xs, vec![0.0, 5.0, 10.0, 15.0, 20.0]);
        for (x, y) in s {
            assert_eq!(y, child.eval(x).unwrap());
        }
    }

    #[test]
    fn sample_curve_errors() {
        assert!(old().sample_curve(5.0, 5.0, 2).is_err());
        assert!(old().sample_curve(6.0, 5.0, 2).is_err());
        assert!(old().sample_curve(0.0, 5.0, 1).is_err());
    }

    #[test]
    fn curve_csv_layout() {
        let mut buf = Vec::new();
        write_curve_csv(&old().sample_curve(50.0, 65.0, 2).unwrap(), &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "x,degree\n50.000000,0.000000\n65.000000,1.000000\n"
        );
    }

    #[test]
    fn json_round_trip_validates() {
        let json = r#"{"nodes":[[50,0],[65,1]],"left_tail":0,"right_tail":1}"#;
        let mf: MembershipFunction = serde_json::from_str(json).unwrap();
        assert_eq!(mf, old());
        let bad = r#"{"nodes":[[5,1],[5,0]],"left_tail":1,"right_tail":0}"#;
        assert!(serde_json::from_str::<MembershipFunction>(bad).is_err());
    }
}
