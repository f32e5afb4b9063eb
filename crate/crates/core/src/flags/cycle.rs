//! Points of `B_{u,w}` for a single cycle `w = (1,…,z)` and the action of
//! the deepest congruence subgroup `{I + π^{r−1}X}` on them.

use serde::Serialize;

use super::embed::iota;
use super::enumerate::{coxeter_count, cycle_position, enumerate_brute, enumerate_cycle, FlagSpace};
use super::flag::{in_dl_variety, Flag};
use crate::algebra::field::{field, Fq};
use crate::algebra::linalg::FieldMatrix;
use crate::algebra::trunc::TruncMatrix;
use crate::error::{Error, Result};
use crate::twist::Check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleCase {
    /// `z = 1`
    Rational,
    /// `1 < z < n`
    Short,
    /// `z = n`
    Full,
    /// `z > n`
    Empty,
}

impl CycleCase {
    pub fn of(n: usize, z: usize) -> Self {
        match z {
            1 => CycleCase::Rational,
            z if z < n => CycleCase::Short,
            z if z == n => CycleCase::Full,
            _ => CycleCase::Empty,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CycleCase::Rational => "i",
            CycleCase::Short => "ii",
            CycleCase::Full => "iii",
            CycleCase::Empty => "iv",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CountRow {
    pub m: usize,
    pub count: u64,
    /// Brute-force count, when cross-checked.
    pub brute: Option<u64>,
    /// `|Y_z(F_{q^m})|` (absent for `z = 1`).
    pub coxeter: Option<u64>,
    /// `count / |Y_z|` when it divides.
    pub n_comp: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MovedFlag {
    pub m: usize,
    pub flag: Vec<Vec<Vec<u8>>>,
    /// `X` in the congruence element `I + π^{r−1}X`.
    pub x: Vec<Vec<Vec<u8>>>,
    pub image: Vec<Vec<Vec<u8>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleReport {
    pub n: usize,
    pub r: usize,
    pub q: u64,
    pub z: usize,
    pub case: CycleCase,
    pub w: Vec<usize>,
    pub counts: Vec<CountRow>,
    pub n_comp: Option<u64>,
    pub witness: Option<MovedFlag>,
    pub checks: Vec<Check>,
}

impl CycleReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Debug)]
pub struct CycleOptions {
    pub m_list: Vec<usize>,
    /// Cross-check against the brute enumerator where its guard allows.
    pub xcheck: bool,
    pub max_flags: u128,
}

/// `x_i^{(t)}` as a coordinate index (`i` is 1-based).
fn idx(n: usize, i: usize, t: usize) -> usize {
    t * n + i - 1
}

/// The rational `u`-stable flag whose piece of dimension `(n−1)(r−1)+1` contains
/// `x_n^{(0)} + x_1^{(r−1)}`; the congruence subgroup does not fix it.
pub fn special_flag(space: &FlagSpace) -> Flag {
    let (n, r) = (space.n, space.r);
    let f = &space.field;
    let dim = space.dim();
    let unit = |k: usize| {
        let mut v = vec![Fq::ZERO; dim];
        v[k] = f.one();
        v
    };
    let mut vs = Vec::with_capacity(dim);
    for t in (1..r).rev() {
        for i in (2..=n).rev() {
            vs.push(unit(idx(n, i, t)));
        }
    }
    let mut pivot = unit(idx(n, n, 0));
    pivot[idx(n, 1, r - 1)] = f.one();
    vs.push(pivot);
    for t in (1..r).rev() {
        vs.push(unit(idx(n, 1, t)));
    }
    for i in (1..n).rev() {
        vs.push(unit(idx(n, i, 0)));
    }
    Flag::from_vectors(&vs, f).expect("basis vectors")
}

/// `(X, ι(I + π^{r−1}X))` for every `X ∈ M_n(F_q)`, embedded into `F_{q^m}`.
pub fn congruence_elements(space: &FlagSpace) -> Result<Vec<(TruncMatrix, FieldMatrix)>> {
    let small = space.emb.small();
    let (n, r) = (space.n, space.r);
    let q = small.size().unwrap();
    let count = q.checked_pow((n * n) as u32).filter(|&c| c <= 1 << 20);
    let count = count.ok_or_else(|| Error::GuardExceeded("congruence subgroup too large".into()))?;
    Ok((0..count)
        .map(|mut code| {
            let mut layers = vec![vec![Fq::ZERO; n * n]; r];
            for i in 0..n {
                layers[0][i * n + i] = small.one();
            }
            let mut x = vec![Fq::ZERO; n * n];
            for slot in x.iter_mut() {
                *slot = small.from_index(code % q);
                code /= q;
            }
            for (a, &v) in x.iter().enumerate() {
                layers[r - 1][a] = small.add(layers[r - 1][a], v);
            }
            let xm = TruncMatrix::from_layers(n, &[x]);
            let k = TruncMatrix::from_layers(n, &layers).embed(&space.emb);
            (xm, iota(&k))
        })
        .collect())
}

fn moved_by(space: &FlagSpace, flags: &[Flag], ks: &[(TruncMatrix, FieldMatrix)]) -> Option<MovedFlag> {
    let f = &space.field;
    let small = space.emb.small();
    flags.iter().find_map(|fl| {
        ks.iter().find_map(|(x, k)| {
            let img = fl.apply(k, f);
            (&img != fl).then(|| MovedFlag {
                m: space.m,
                flag: fl.to_nested(f),
                x: x.to_nested(small).into_iter().map(|row| row.into_iter().map(|e| e[0].clone()).collect()).collect(),
                image: img.to_nested(f),
            })
        })
    })
}

pub fn cycle_report(n: usize, r: usize, p: u32, k: usize, z: usize, opts: &CycleOptions) -> Result<CycleReport> {
    if n < 2 || r < 2 {
        return Err(Error::InvalidParameter("cycle report needs n, r ≥ 2".into()));
    }
    if z == 0 || z > n * r {
        return Err(Error::InvalidParameter(format!("z = {z} outside [1, {}]", n * r)));
    }
    let case = CycleCase::of(n, z);
    let q = field(p, k, 1)?.size().unwrap() as u64;
    let mut counts = Vec::new();
    let mut checks = Vec::new();
    let mut witness = None;
    let mut w = Vec::new();
    let mut brute_mismatch = Vec::new();
    let mut moved_points = Vec::new();
    let mut unstable = Vec::new();
    for &m in &opts.m_list {
        let space = FlagSpace::new(n, r, p, k, m)?;
        w = cycle_position(&space, z);
        let flags = enumerate_cycle(&space, z, opts.max_flags)?;
        let f = &space.field;
        if flags.iter().any(|fl| !fl.is_stable(&space.u, f) || !in_dl_variety(fl, &w, f)) {
            unstable.push(m);
        }
        let brute = if opts.xcheck && space.flag_count() <= opts.max_flags {
            let b = enumerate_brute(&space, &w, opts.max_flags)?;
            if b != flags {
                brute_mismatch.push(m);
            }
            Some(b.len() as u64)
        } else {
            None
        };
        let coxeter = if z >= 2 { Some(coxeter_count(z, p, k, m, opts.max_flags)?) } else { None };
        let count = flags.len() as u64;
        let n_comp = coxeter.filter(|&y| y > 0 && count.is_multiple_of(y)).map(|y| count / y);
        counts.push(CountRow { m, count, brute, coxeter, n_comp });

        let ks = congruence_elements(&space)?;
        match case {
            CycleCase::Rational if witness.is_none() => {
                let special = special_flag(&space);
                checks.push(Check::from_bool(
                    "explicit flag lies in B_{u,w}",
                    special.is_stable(&space.u, f) && in_dl_variety(&special, &w, f),
                    format!("m = {m}"),
                ));
                witness = moved_by(&space, std::slice::from_ref(&special), &ks);
            }
            CycleCase::Short if witness.is_none() => witness = moved_by(&space, &flags, &ks),
            CycleCase::Full
                if moved_by(&space, &flags, &ks).is_some() => {
                    moved_points.push(m);
                }
            _ => {}
        }
    }

    checks.push(Check::from_bool(
        "enumerated points are u-stable in position w",
        unstable.is_empty(),
        format!("failures at m = {unstable:?}"),
    ));
    if opts.xcheck {
        let compared: Vec<usize> = counts.iter().filter(|c| c.brute.is_some()).map(|c| c.m).collect();
        checks.push(Check::from_bool(
            "brute and structured enumerations agree",
            brute_mismatch.is_empty(),
            format!("compared at m = {compared:?}, mismatches at {brute_mismatch:?}"),
        ));
    }
    let factored: Vec<&CountRow> = counts.iter().filter(|c| c.m >= 2).collect();
    let n_comp = factored.first().and_then(|c| c.n_comp);
    let factorization = |checks: &mut Vec<Check>| {
        let ok = !factored.is_empty() && n_comp.is_some_and(|v| v > 0) && factored.iter().all(|c| c.n_comp == n_comp);
        checks.push(Check::from_bool(
            "counts factor as N·|Y_z| with constant N",
            ok,
            format!("N = {n_comp:?} over m = {:?}", factored.iter().map(|c| c.m).collect::<Vec<_>>()),
        ));
    };
    match case {
        CycleCase::Rational => {
            checks.push(Check::from_bool(
                "congruence element moves the explicit flag",
                witness.is_some(),
                "primitivity witness",
            ));
            let first = counts.first().map(|c| c.count).unwrap_or(0);
            checks.push(Check::from_bool(
                "nonempty and independent of m",
                first > 0 && counts.iter().all(|c| c.count == first),
                format!("{first} rational points"),
            ));
        }
        CycleCase::Short => {
            factorization(&mut checks);
            checks.push(Check::from_bool("congruence element moves a point", witness.is_some(), "primitivity witness"));
        }
        CycleCase::Full => {
            factorization(&mut checks);
            checks.push(Check::from_bool(
                "congruence subgroup fixes every point",
                moved_points.is_empty(),
                format!("moved points at m = {moved_points:?}"),
            ));
        }
        CycleCase::Empty => {
            let nonempty: Vec<usize> = counts.iter().filter(|c| c.count > 0).map(|c| c.m).collect();
            checks.push(Check::from_bool("empty at every tested m", nonempty.is_empty(), format!("nonempty at {nonempty:?}")));
        }
    }
    Ok(CycleReport { n, r, q, z, case, w, counts, n_comp, witness, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flags::enumerate::MAX_FLAGS;

    #[test]
    fn special_flag_is_rational_and_stable() {
        for (n, r) in [(2, 2), (3, 2), (2, 3)] {
            let space = FlagSpace::new(n, r, 3, 1, 1).unwrap();
            let fl = special_flag(&space);
            assert!(fl.is_rational(&space.field));
            assert!(fl.is_stable(&space.u, &space.field));
        }
    }

    #[test]
    fn congruence_elements_commute_with_u() {
        let space = FlagSpace::new(2, 2, 3, 1, 2).unwrap();
        let ks = congruence_elements(&space).unwrap();
        assert_eq!(ks.len(), 81);
        let f = &space.field;
        for (_, k) in &ks {
            assert_eq!(k.mul(&space.u, f), space.u.mul(k, f));
        }
    }

    #[test]
    fn rational_case_small() {
        let opts = CycleOptions { m_list: vec![1, 2], xcheck: true, max_flags: MAX_FLAGS };
        let rep = cycle_report(2, 2, 3, 1, 1, &opts).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.checks);
        assert_eq!(rep.case, CycleCase::Rational);
    }
}
