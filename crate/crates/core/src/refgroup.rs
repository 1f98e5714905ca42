//! Finite matrix groups acting on affine space and their reflection data.
//!
//! Convention: element `g` with stored matrix `M_g` sends a point `x` to `M_g x`,
//! the product `g·h` has matrix `M_h M_g`, and functions transform by
//! `(g·f)(x) = f(M_g x)`, which is a left action.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::scalars::Scalar;

pub type Matrix = Vec<Vec<Scalar>>;

pub const DEFAULT_CLOSURE_BOUND: usize = 10_000;

pub fn identity_matrix(r: usize) -> Matrix {
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| if i == j { Scalar::one() } else { Scalar::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Scalar::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] += &(&a[i][l] * &b[l][j]);
                }
            }
        }
    }
    out
}

pub fn transpose(a: &Matrix) -> Matrix {
    let m = a.first().map_or(0, Vec::len);
    (0..m).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Row echelon form in place; returns the pivot columns.
fn row_reduce(a: &mut Matrix) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero pivot");
        for j in 0..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let d = &f * &a[r][j];
                    a[i][j] -= &d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(a: &Matrix) -> usize {
    let mut m = a.clone();
    row_reduce(&mut m).len()
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .zip(identity_matrix(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::NotInvertible);
    }
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn trace(a: &Matrix) -> Scalar {
    let mut t = Scalar::zero();
    for (i, row) in a.iter().enumerate() {
        t += &row[i];
    }
    t
}

/// `v M` for a row vector `v`.
pub fn row_times(v: &[Scalar], m: &Matrix) -> Vec<Scalar> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| {
            let mut acc = Scalar::zero();
            for (i, vi) in v.iter().enumerate() {
                if !vi.is_zero() && !m[i][j].is_zero() {
                    acc += &(vi * &m[i][j]);
                }
            }
            acc
        })
        .collect()
}

/// `M v` for a column vector `v`.
pub fn times_col(m: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    m.iter()
        .map(|row| {
            let mut acc = Scalar::zero();
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
            acc
        })
        .collect()
}

/// Scale so the first nonzero coordinate is 1; returns the scale factor removed.
pub fn normalize_form(v: &[Scalar]) -> Option<(Vec<Scalar>, Scalar)> {
    let lead = v.iter().find(|c| !c.is_zero())?.clone();
    let inv = lead.inv()?;
    Some((v.iter().map(|c| c * &inv).collect(), lead))
}

/// A pseudo-reflection together with its hyperplane and conormal eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionDatum {
    /// Label of the group element.
    pub element: usize,
    /// Index into [`ReflectionGroup::hyperplanes`].
    pub hyperplane: usize,
    /// Normalized linear form `α` cutting out the fixed hyperplane.
    pub alpha: Vec<Scalar>,
    /// Eigenvalue with `s·α = λ α`.
    pub lambda: Scalar,
}

/// Closure of a finite matrix group with cached reflection data.
#[derive(Clone, Debug)]
pub struct ReflectionGroup {
    name: String,
    rank: usize,
    field_order: u32,
    matrices: Vec<Matrix>,
    inverse_matrices: Vec<Matrix>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    hyperplanes: Vec<Vec<Scalar>>,
    // hyperplane_action[g][Y] = (Y', μ) with g·α_Y = μ α_{Y'}
    hyperplane_action: Vec<Vec<(usize, Scalar)>>,
    reflections: Vec<ReflectionDatum>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl ReflectionGroup {
    /// Close `generators` under multiplication, failing past `bound` elements.
    pub fn from_generators(
        name: &str,
        field_order: u32,
        generators: &[Matrix],
        bound: usize,
    ) -> Result<ReflectionGroup> {
        let rank = generators
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::UnsupportedGroup("no generators".into()))?;
        for g in generators {
            if g.len() != rank || g.iter().any(|row| row.len() != rank) {
                return Err(Error::Dimension(format!("generator is not {rank}x{rank}")));
            }
            inverse(g)?;
        }
        for i in 0..generators.len() {
            for j in 0..i {
                if generators[i] == generators[j] {
                    return Err(Error::NotFaithfulAction(j, i));
                }
            }
        }

        let id = identity_matrix(rank);
        let mut matrices = vec![id.clone()];
        let mut index: HashMap<Matrix, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for gen in generators {
                let m = mat_mul(gen, &matrices[i]);
                if !index.contains_key(&m) {
                    if matrices.len() >= bound {
                        return Err(Error::NotFinite { bound });
                    }
                    index.insert(m.clone(), matrices.len());
                    queue.push_back(matrices.len());
                    matrices.push(m);
                }
            }
        }

        let n = matrices.len();
        let mut table = vec![vec![0; n]; n];
        for (a, ma) in matrices.iter().enumerate() {
            for (b, mb) in matrices.iter().enumerate() {
                table[a][b] = *index
                    .get(&mat_mul(mb, ma))
                    .ok_or(Error::NotFinite { bound })?;
            }
        }
        let inverses: Vec<usize> = (0..n)
            .map(|a| (0..n).find(|&b| table[a][b] == 0).expect("group inverse"))
            .collect();
        let inverse_matrices = inverses.iter().map(|&b| matrices[b].clone()).collect();

        let mut group = ReflectionGroup {
            name: name.to_string(),
            rank,
            field_order,
            matrices,
            inverse_matrices,
            table,
            inverses,
            hyperplanes: vec![],
            hyperplane_action: vec![],
            reflections: vec![],
            classes: vec![],
            class_of: vec![],
        };
        group.find_reflections()?;
        Ok(group)
    }

    fn find_reflections(&mut self) -> Result<()> {
        let id = identity_matrix(self.rank);
        let r = self.rank as i64;
        for (label, m) in self.matrices.iter().enumerate() {
            let defect: Matrix = m
                .iter()
                .zip(&id)
                .map(|(row, idr)| row.iter().zip(idr).map(|(a, b)| a - b).collect())
                .collect();
            if rank(&defect) != 1 {
                continue;
            }
            let row = defect.iter().find(|row| row.iter().any(|c| !c.is_zero())).unwrap();
            let (alpha, _) = normalize_form(row).unwrap();
            let lambda = &trace(m) - &Scalar::from_int(r - 1);
            if row_times(&alpha, m) != alpha.iter().map(|a| a * &lambda).collect::<Vec<_>>() {
                return Err(Error::EigenvalueNotInField(label));
            }
            let hyperplane = match self.hyperplanes.iter().position(|h| *h == alpha) {
                Some(i) => i,
                None => {
                    self.hyperplanes.push(alpha.clone());
                    self.hyperplanes.len() - 1
                }
            };
            self.reflections.push(ReflectionDatum {
                element: label,
                hyperplane,
                alpha,
                lambda,
            });
        }

        self.hyperplane_action = self
            .matrices
            .iter()
            .map(|m| {
                self.hyperplanes
                    .iter()
                    .map(|a| {
                        let (image, mu) = normalize_form(&row_times(a, m)).unwrap();
                        let target = self
                            .hyperplanes
                            .iter()
                            .position(|h| *h == image)
                            .expect("arrangement is group stable");
                        (target, mu)
                    })
                    .collect()
            })
            .collect();

        let by_element: BTreeMap<usize, usize> = self
            .reflections
            .iter()
            .enumerate()
            .map(|(i, d)| (d.element, i))
            .collect();
        self.class_of = vec![usize::MAX; self.reflections.len()];
        for i in 0..self.reflections.len() {
            if self.class_of[i] != usize::MAX {
                continue;
            }
            let s = self.reflections[i].element;
            let mut members: Vec<usize> = (0..self.order())
                .map(|h| {
                    let c = self.mul(self.mul(self.inverses[h], s), h);
                    by_element[&c]
                })
                .collect();
            members.sort_by_key(|&k| self.reflections[k].element);
            members.dedup();
            let cls = self.classes.len();
            for &k in &members {
                self.class_of[k] = cls;
            }
            self.classes.push(members);
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Cyclotomic order of the field the matrices live in.
    pub fn field_order(&self) -> u32 {
        self.field_order
    }

    pub fn order(&self) -> usize {
        self.matrices.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.matrices[g]
    }

    pub fn inverse_matrix(&self, g: usize) -> &Matrix {
        &self.inverse_matrices[g]
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn hyperplanes(&self) -> &[Vec<Scalar>] {
        &self.hyperplanes
    }

    /// `(Y', μ)` with `g·α_Y = μ α_{Y'}`.
    pub fn hyperplane_image(&self, g: usize, y: usize) -> (usize, &Scalar) {
        let (t, ref mu) = self.hyperplane_action[g][y];
        (t, mu)
    }

    pub fn reflections(&self) -> &[ReflectionDatum] {
        &self.reflections
    }

    /// Conjugacy classes of reflection data as index lists into [`Self::reflections`].
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, reflection: usize) -> usize {
        self.class_of[reflection]
    }

    /// Lowest element label in a class.
    pub fn class_representative(&self, class: usize) -> usize {
        self.reflections[self.classes[class][0]].element
    }

    /// `(g·f)(x) = f(M_g x)`.
    pub fn act_on_poly(&self, g: usize, f: &MultiPoly) -> MultiPoly {
        if g == 0 {
            return f.clone();
        }
        f.substitute_linear(&self.matrices[g])
    }

    /// `g·(a·x) = (a M_g)·x` on the coordinates of a linear form.
    pub fn act_on_linear_form(&self, g: usize, a: &[Scalar]) -> Vec<Scalar> {
        row_times(a, &self.matrices[g])
    }

    /// Pushforward of a constant vector field: `g(v) = M_g⁻¹ v`.
    pub fn act_on_vector(&self, g: usize, v: &[Scalar]) -> Vec<Scalar> {
        times_col(&self.inverse_matrices[g], v)
    }
}

/// Constant values of a reflection function, one per conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionFunction {
    values: Vec<Scalar>,
}

impl ReflectionFunction {
    pub fn new(group: &ReflectionGroup, values: Vec<Scalar>) -> Result<ReflectionFunction> {
        if values.len() != group.classes().len() {
            return Err(Error::InvalidParameters(format!(
                "{} conjugacy classes but {} values",
                group.classes().len(),
                values.len()
            )));
        }
        Ok(ReflectionFunction { values })
    }

    pub fn constant(group: &ReflectionGroup, c: Scalar) -> ReflectionFunction {
        ReflectionFunction {
            values: vec![c; group.classes().len()],
        }
    }

    pub fn zero(group: &ReflectionGroup) -> ReflectionFunction {
        ReflectionFunction::constant(group, Scalar::zero())
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn on_class(&self, class: usize) -> &Scalar {
        &self.values[class]
    }

    pub fn on_reflection(&self, group: &ReflectionGroup, reflection: usize) -> &Scalar {
        &self.values[group.class_of(reflection)]
    }

    pub fn scale(&self, lambda: &Scalar) -> ReflectionFunction {
        ReflectionFunction {
            values: self.values.iter().map(|v| v * lambda).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }
}

fn permutation_matrix(n: usize, perm: &[usize]) -> Matrix {
    // row i has its 1 in column perm[i], so (M x)_i = x_{perm[i]}
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if perm[i] == j { Scalar::one() } else { Scalar::zero() })
                .collect()
        })
        .collect()
}

fn transposition(n: usize, a: usize, b: usize) -> Matrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.swap(a, b);
    permutation_matrix(n, &perm)
}

fn ints(rows: &[&[i64]]) -> Matrix {
    rows.iter()
        .map(|r| r.iter().map(|&k| Scalar::from_int(k)).collect())
        .collect()
}

/// `Z/m` acting on the line by `ζ_m`; `field_order` must be a multiple of `m` (or of `m/2` when odd).
pub fn cyclic(m: u32, field_order: u32) -> Result<ReflectionGroup> {
    if m < 2 {
        return Err(Error::UnsupportedGroup("cyclic group needs m >= 2".into()));
    }
    let z = Scalar::root_of_unity(m, field_order).ok_or_else(|| {
        Error::InvalidField(format!("Q(zeta_{field_order}) has no primitive {m}-th root of unity"))
    })?;
    ReflectionGroup::from_generators(&format!("Z/{m}"), field_order, &[vec![vec![z]]], DEFAULT_CLOSURE_BOUND)
}

/// The trivial group on `K^r`.
pub fn trivial(r: usize, field_order: u32) -> Result<ReflectionGroup> {
    ReflectionGroup::from_generators("1", field_order, &[identity_matrix(r)], DEFAULT_CLOSURE_BOUND)
}

/// `S_n` permuting coordinates of `K^n`.
pub fn symmetric(n: usize, field_order: u32) -> Result<ReflectionGroup> {
    if n < 2 {
        return Err(Error::UnsupportedGroup("S_n needs n >= 2".into()));
    }
    let gens: Vec<Matrix> = (0..n - 1).map(|i| transposition(n, i, i + 1)).collect();
    ReflectionGroup::from_generators(&format!("S{n}"), field_order, &gens, DEFAULT_CLOSURE_BOUND)
}

/// Dihedral group of order `2m` on `K^2`; integral Cartan form for crystallographic `m`.
pub fn dihedral(m: u32, field_order: u32) -> Result<ReflectionGroup> {
    let cartan: Option<[[i64; 2]; 2]> = match m {
        2 => Some([[2, 0], [0, 2]]),
        3 => Some([[2, -1], [-1, 2]]),
        4 => Some([[2, -2], [-1, 2]]),
        6 => Some([[2, -3], [-1, 2]]),
        _ => None,
    };
    let gens = match cartan {
        Some(a) => (0..2)
            .map(|i| {
                let mut rows = [[1i64, 0], [0, 1]];
                for j in 0..2 {
                    rows[i][j] -= a[i][j];
                }
                ints(&[&rows[0], &rows[1]])
            })
            .collect(),
        None => {
            if m < 2 {
                return Err(Error::UnsupportedGroup("dihedral group needs m >= 2".into()));
            }
            let z = Scalar::root_of_unity(m, field_order).ok_or_else(|| {
                Error::InvalidField(format!(
                    "dihedral I2({m}) needs a primitive {m}-th root of unity; Q(zeta_{field_order}) has none"
                ))
            })?;
            let zi = z.inv().unwrap();
            vec![
                vec![vec![z, Scalar::zero()], vec![Scalar::zero(), zi]],
                ints(&[&[0, 1], &[1, 0]]),
            ]
        }
    };
    ReflectionGroup::from_generators(&format!("I2({m})"), field_order, &gens, DEFAULT_CLOSURE_BOUND)
}

/// Hyperoctahedral group `B_n`: signed permutations of `K^n`.
pub fn hyperoctahedral(n: usize, field_order: u32) -> Result<ReflectionGroup> {
    if n < 1 {
        return Err(Error::UnsupportedGroup("B_n needs n >= 1".into()));
    }
    let mut gens: Vec<Matrix> = (0..n.saturating_sub(1)).map(|i| transposition(n, i, i + 1)).collect();
    let mut flip = identity_matrix(n);
    flip[0][0] = Scalar::from_int(-1);
    gens.push(flip);
    ReflectionGroup::from_generators(&format!("B{n}"), field_order, &gens, DEFAULT_CLOSURE_BOUND)
}

/// Look up a built-in family by name.
pub fn build_family(family: &str, rank: usize, m: u32, field_order: u32) -> Result<ReflectionGroup> {
    match family {
        "cyclic" => {
            if rank != 1 {
                return Err(Error::UnsupportedGroup("cyclic family has rank 1".into()));
            }
            cyclic(m, field_order)
        }
        "trivial" => trivial(rank, field_order),
        "symmetric" => symmetric(rank, field_order),
        "dihedral" => {
            if rank != 2 {
                return Err(Error::UnsupportedGroup("dihedral family has rank 2".into()));
            }
            dihedral(m, field_order)
        }
        "hyperoctahedral" => hyperoctahedral(rank, field_order),
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}
