//! Twist-invariance of primitive characters of `SL_2(F_q[ε])`: a primitive
//! irreducible is fixed by `Sh_G` exactly when its orbit is regular
//! semisimple.

use serde::Serialize;

use super::clifford::CliffordReport;
use super::dixon::CharacterTable;
use super::orbits::{OrbitMapResult, OrbitType};
use crate::algebra::trunc::TruncMatrix;
use crate::error::{Error, Result};
use crate::groups::{ClassTable, Family};
use crate::twist::{Check, TwistPermutation};

#[derive(Clone, Debug, Serialize)]
pub struct CharacterRow {
    pub row: usize,
    pub degree: u64,
    pub orbit: usize,
    pub orbit_type: OrbitType,
    pub orbit_label: Option<String>,
    pub primitive: bool,
    pub sh_fixed: bool,
}

/// Class of `X′ = [[−1, x′ε],[0, −1]]` where `R ≠ Sh(R)`.
#[derive(Clone, Debug, Serialize)]
pub struct MovedWitness {
    pub induced: usize,
    pub table_row: Option<usize>,
    pub x_prime: Vec<u8>,
    pub class: usize,
    pub image_class: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub q: u64,
    pub allowed_degrees: Vec<u64>,
    pub rows: Vec<CharacterRow>,
    pub witnesses: Vec<MovedWitness>,
    pub checks: Vec<Check>,
}

impl InvarianceReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Degrees of irreducible characters of `SL_2(F_q[ε])`, `q` odd.
pub fn allowed_degrees(q: u64) -> Vec<u64> {
    let mut d = vec![1, q, q + 1, q.div_ceil(2), q - 1, (q - 1) / 2, q * q + q, q * q - q, (q * q - 1) / 2];
    d.sort_unstable();
    d.dedup();
    d
}

pub fn sh_fixed_rows(tab: &CharacterTable, tp: &TwistPermutation) -> Vec<bool> {
    tab.rows.iter().map(|row| (0..row.len()).all(|c| row[tp.image(c)].cyc == row[c].cyc)).collect()
}

fn rows_check(name: &str, offenders: Vec<usize>) -> Check {
    Check {
        name: name.into(),
        pass: offenders.is_empty(),
        detail: if offenders.is_empty() { "ok".into() } else { format!("offending characters {offenders:?}") },
    }
}

pub fn verify_invariance(
    ct: &ClassTable,
    tab: &CharacterTable,
    om: &OrbitMapResult,
    tp: &TwistPermutation,
    clifford: &CliffordReport,
) -> Result<InvarianceReport> {
    let gt = ct.group();
    let spec = *gt.spec();
    if spec.family != Family::SL || spec.n != 2 || spec.r != 2 || spec.p == 2 {
        return Err(Error::InvalidParameter("needs SL_2 over F_q[ε], q odd".into()));
    }
    let f = gt.field().clone();
    let q = spec.q() as u64;
    let fixed = sh_fixed_rows(tab, tp);
    let rows: Vec<CharacterRow> = (0..tab.len())
        .map(|i| {
            let o = &om.orbits[om.rows[i].orbit];
            CharacterRow {
                row: i,
                degree: tab.degrees[i],
                orbit: o.index,
                orbit_type: o.kind,
                orbit_label: o.label.clone(),
                primitive: om.rows[i].primitive,
                sh_fixed: fixed[i],
            }
        })
        .collect();

    let allowed = allowed_degrees(q);
    let pick = |pred: &dyn Fn(&CharacterRow) -> bool| -> Vec<usize> { rows.iter().filter(|r| pred(r)).map(|r| r.row).collect() };

    let x_primes: Vec<(Vec<u8>, usize)> = (1..q as u128)
        .map(|i| {
            let x = f.from_index(i);
            let m = TruncMatrix::from_layers(
                2,
                &[vec![f.from_int(-1), f.zero(), f.zero(), f.from_int(-1)], vec![f.zero(), x, f.zero(), f.zero()]],
            );
            let g = gt.index_of(&m).ok_or_else(|| Error::Internal("X′ outside the group".into()))?;
            Ok((x.coeffs(f.degree()).to_vec(), ct.class_of(g)))
        })
        .collect::<Result<_>>()?;
    let mut witnesses = Vec::new();
    let mut unwitnessed = Vec::new();
    for (i, r) in clifford.characters.iter().enumerate() {
        let w = x_primes.iter().find(|(_, c)| r.values[tp.image(*c)] != r.values[*c]);
        match w {
            Some((x, c)) => witnesses.push(MovedWitness {
                induced: i,
                table_row: r.table_row,
                x_prime: x.clone(),
                class: *c,
                image_class: tp.image(*c),
            }),
            None => unwitnessed.push(i),
        }
    }

    let nilpotent = pick(&|r| r.primitive && r.orbit_type == OrbitType::RegularNilpotent).len() as u64;
    let checks = vec![
        rows_check("degrees in the allowed list", pick(&|r| !allowed.contains(&r.degree))),
        Check::from_bool(
            "sum of squared degrees",
            tab.degrees.iter().map(|d| d * d).sum::<u64>() == gt.order() as u64,
            format!("|G| = {}", gt.order()),
        ),
        Check::from_bool("4q nilpotent primitive characters", nilpotent == 4 * q, format!("{nilpotent} found")),
        rows_check(
            "primitive orbits are regular",
            pick(&|r| r.primitive && !matches!(r.orbit_type, OrbitType::RegularNilpotent | OrbitType::RegularSemisimple)),
        ),
        rows_check(
            "primitive: Sh-fixed iff regular semisimple",
            pick(&|r| r.primitive && r.sh_fixed != (r.orbit_type == OrbitType::RegularSemisimple)),
        ),
        rows_check("degree q^2±q characters are Sh-fixed", pick(&|r| (r.degree == q * q + q || r.degree == q * q - q) && !r.sh_fixed)),
        Check {
            name: "induced nilpotent characters moved at X′".into(),
            pass: unwitnessed.is_empty() && !clifford.characters.is_empty(),
            detail: if unwitnessed.is_empty() {
                format!("{} witnesses", witnesses.len())
            } else {
                format!("no witness for induced characters {unwitnessed:?}")
            },
        },
    ];
    Ok(InvarianceReport { q, allowed_degrees: allowed, rows, witnesses, checks })
}
