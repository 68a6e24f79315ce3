//! High-precision oracle shared by the integration tests.
//!
//! Evaluates the defining formulas at 256 bits (about 77 decimal digits)
//! with astro-float, independently of the library's stable branches.
#![allow(dead_code)]

use astro_float::{BigFloat, Consts, RoundingMode};

const PREC: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

pub struct Oracle {
    cc: Consts,
}

#[derive(Clone, Debug)]
pub struct Big(pub BigFloat);

impl Big {
    pub fn f64(&self) -> f64 {
        let s = format!("{}", self.0);
        s.parse::<f64>()
            .unwrap_or_else(|_| panic!("cannot parse oracle output {s}"))
    }
}

impl Oracle {
    pub fn new() -> Self {
        Self {
            cc: Consts::new().expect("constants cache"),
        }
    }

    pub fn num(&self, x: f64) -> Big {
        Big(BigFloat::from_f64(x, PREC))
    }

    pub fn parse(&mut self, s: &str) -> Big {
        Big(BigFloat::parse(
            s,
            astro_float::Radix::Dec,
            PREC,
            RM,
            &mut self.cc,
        ))
    }

    pub fn int(&self, n: i64) -> Big {
        Big(BigFloat::from_i64(n, PREC))
    }

    pub fn add(&self, x: &Big, y: &Big) -> Big {
        Big(x.0.add(&y.0, PREC, RM))
    }
    pub fn sub(&self, x: &Big, y: &Big) -> Big {
        Big(x.0.sub(&y.0, PREC, RM))
    }
    pub fn mul(&self, x: &Big, y: &Big) -> Big {
        Big(x.0.mul(&y.0, PREC, RM))
    }
    pub fn div(&self, x: &Big, y: &Big) -> Big {
        Big(x.0.div(&y.0, PREC, RM))
    }
    pub fn sqrt(&self, x: &Big) -> Big {
        Big(x.0.sqrt(PREC, RM))
    }
    pub fn ln(&mut self, x: &Big) -> Big {
        Big(x.0.ln(PREC, RM, &mut self.cc))
    }
    pub fn exp(&mut self, x: &Big) -> Big {
        Big(x.0.exp(PREC, RM, &mut self.cc))
    }
    pub fn asinh(&mut self, x: &Big) -> Big {
        Big(x.0.asinh(PREC, RM, &mut self.cc))
    }
    pub fn asin(&mut self, x: &Big) -> Big {
        Big(x.0.asin(PREC, RM, &mut self.cc))
    }
    pub fn atan(&mut self, x: &Big) -> Big {
        Big(x.0.atan(PREC, RM, &mut self.cc))
    }
    pub fn sinh(&mut self, x: &Big) -> Big {
        Big(x.0.sinh(PREC, RM, &mut self.cc))
    }
    pub fn cosh(&mut self, x: &Big) -> Big {
        Big(x.0.cosh(PREC, RM, &mut self.cc))
    }
    /// `x^y = exp(y ln x)` for `x > 0`; astro-float's `pow` can stall on
    /// bases close to one.
    pub fn pow(&mut self, x: &Big, y: &Big) -> Big {
        let l = self.ln(x);
        let e = self.mul(y, &l);
        self.exp(&e)
    }
    pub fn pi(&mut self) -> Big {
        Big(self.cc.pi(PREC, RM))
    }

    pub fn to_f64(&self, x: &Big) -> f64 {
        x.f64()
    }
}

use means_lab::MeanKind;

/// The textbook formula of each mean, evaluated at 256 bits.
pub fn oracle_mean(o: &mut Oracle, kind: MeanKind, a: f64, b: f64) -> Big {
    let (a, b) = (o.num(a), o.num(b));
    let two = o.int(2);
    let sum = o.add(&a, &b);
    let diff = o.sub(&a, &b);
    let gap = o.div(&diff, &sum);
    match kind {
        MeanKind::Harmonic => {
            let ab = o.mul(&a, &b);
            o.div(&o.mul(&two, &ab), &sum)
        }
        MeanKind::Geometric => o.sqrt(&o.mul(&a, &b)),
        MeanKind::Logarithmic | MeanKind::GeneralizedLog(-1.0) => {
            let la = o.ln(&a);
            let lb = o.ln(&b);
            o.div(&diff, &o.sub(&la, &lb))
        }
        MeanKind::SeiffertFirst => {
            let r = o.sqrt(&o.div(&a, &b));
            let at = o.atan(&r);
            let pi = o.pi();
            let den = o.sub(&o.mul(&o.int(4), &at), &pi);
            o.div(&diff, &den)
        }
        MeanKind::Arithmetic => o.div(&sum, &two),
        MeanKind::NeumanSandor => {
            let s = o.asinh(&gap);
            o.div(&diff, &o.mul(&two, &s))
        }
        MeanKind::SeiffertSecond => {
            let s = o.atan(&gap);
            o.div(&diff, &o.mul(&two, &s))
        }
        MeanKind::Quadratic => {
            let sq = o.add(&o.mul(&a, &a), &o.mul(&b, &b));
            o.sqrt(&o.div(&sq, &two))
        }
        MeanKind::ContraHarmonic => {
            let sq = o.add(&o.mul(&a, &a), &o.mul(&b, &b));
            o.div(&sq, &sum)
        }
        MeanKind::GeneralizedLog(p) if p == 0.0 => {
            // (1/e) (b^b / a^a)^(1/(b-a))
            let la = o.ln(&a);
            let lb = o.ln(&b);
            let num = o.sub(&o.mul(&b, &lb), &o.mul(&a, &la));
            let e = o.sub(&o.div(&num, &o.sub(&b, &a)), &o.int(1));
            o.exp(&e)
        }
        MeanKind::GeneralizedLog(p) => {
            let pb = o.num(p);
            let q = o.add(&pb, &o.int(1));
            let bq = o.pow(&b, &q);
            let aq = o.pow(&a, &q);
            let num = o.sub(&bq, &aq);
            let den = o.mul(&q, &o.sub(&b, &a));
            let inv_p = o.div(&o.int(1), &pb);
            o.pow(&o.div(&num, &den), &inv_p)
        }
    }
}

pub fn rel_err(o: &Oracle, got: f64, want: &Big) -> f64 {
    let w = o.to_f64(want);
    ((got - w) / w).abs()
}

/// `(t cosh t - sinh t) / (t (cosh(2t)/2 + cosh t - 3/2))`.
pub fn oracle_phi_hq(o: &mut Oracle, t: f64) -> Big {
    let t = o.num(t);
    let (c, s) = (o.cosh(&t), o.sinh(&t));
    let num = o.sub(&o.mul(&t, &c), &s);
    let two_t = o.add(&t, &t);
    let c2 = o.cosh(&two_t);
    let half = o.div(&c2, &o.int(2));
    let inner = o.sub(&o.add(&half, &c), &o.div(&o.int(3), &o.int(2)));
    o.div(&num, &o.mul(&t, &inner))
}

/// `(t (cosh 2t + 1) - 2 sinh t) / (2t (cosh 2t - 1))`.
pub fn oracle_phi_hc(o: &mut Oracle, t: f64) -> Big {
    let t = o.num(t);
    let s = o.sinh(&t);
    let two_t = o.add(&t, &t);
    let c2 = o.cosh(&two_t);
    let num = o.sub(&o.mul(&t, &o.add(&c2, &o.int(1))), &o.add(&s, &s));
    let den = o.mul(&two_t, &o.sub(&c2, &o.int(1)));
    o.div(&num, &den)
}

/// `(sqrt(1+x^2) asinh x - x) / ((sqrt(1+x^2) - sqrt(1-x^2)) asinh x)`.
pub fn oracle_ratio_gq(o: &mut Oracle, x: f64) -> Big {
    let x = o.num(x);
    let x2 = o.mul(&x, &x);
    let up = o.sqrt(&o.add(&o.int(1), &x2));
    let down = o.sqrt(&o.sub(&o.int(1), &x2));
    let s = o.asinh(&x);
    let num = o.sub(&o.mul(&up, &s), &x);
    o.div(&num, &o.mul(&o.sub(&up, &down), &s))
}
