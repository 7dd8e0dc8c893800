//! Finite-dimensional matrix representations over the Gaussian rationals.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use super::{EAElement, UeaError};
use crate::lie::Algebra;
use crate::scalar::{Gauss, ParamPoint, Scalar};

/// Dense square matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    n: usize,
    data: Vec<Gauss>,
}

impl Matrix {
    pub fn zero(n: usize) -> Self {
        Matrix { n, data: vec![Gauss::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n);
        for i in 0..n {
            m.data[i * n + i] = Gauss::one();
        }
        m
    }

    /// Builds from `(row, col, value)` entries (0-based).
    pub fn from_entries(n: usize, entries: &[(usize, usize, Gauss)]) -> Self {
        let mut m = Matrix::zero(n);
        for (r, c, v) in entries {
            m.data[r * n + c] += v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &Gauss {
        &self.data[r * self.n + c]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Gauss::is_zero)
    }

    /// `Some(c)` when the matrix equals `c` times the identity.
    pub fn as_scalar_multiple(&self) -> Option<Gauss> {
        let c = self.get(0, 0).clone();
        for r in 0..self.n {
            for col in 0..self.n {
                let v = self.get(r, col);
                let ok = if r == col { *v == c } else { v.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn scale(&self, s: &Gauss) -> Matrix {
        Matrix { n: self.n, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn commutator(&self, o: &Matrix) -> Matrix {
        &(self * o) - &(o * self)
    }

    /// Kronecker product.
    pub fn kron(&self, o: &Matrix) -> Matrix {
        let n = self.n * o.n;
        let mut m = Matrix::zero(n);
        for a in 0..self.n {
            for b in 0..self.n {
                let x = self.get(a, b);
                if x.is_zero() {
                    continue;
                }
                for c in 0..o.n {
                    for d in 0..o.n {
                        let y = o.get(c, d);
                        if !y.is_zero() {
                            m.data[(a * o.n + c) * n + b * o.n + d] = x * y;
                        }
                    }
                }
            }
        }
        m
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &Matrix) -> Matrix {
        let n = self.n + o.n;
        let mut m = Matrix::zero(n);
        for r in 0..self.n {
            for c in 0..self.n {
                m.data[r * n + c] = self.get(r, c).clone();
            }
        }
        for r in 0..o.n {
            for c in 0..o.n {
                m.data[(self.n + r) * n + self.n + c] = o.get(r, c).clone();
            }
        }
        m
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, o: &Matrix) -> Matrix {
        assert_eq!(self.n, o.n);
        Matrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, o: &Matrix) -> Matrix {
        assert_eq!(self.n, o.n);
        Matrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut out = Matrix::zero(n);
        for r in 0..n {
            for k in 0..n {
                let a = &self.data[r * n + k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = &o.data[k * n + c];
                    if !b.is_zero() {
                        out.data[r * n + c] += &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Images of the generators of `alg`, validated against its bracket table.
#[derive(Clone, Debug)]
pub struct Representation {
    alg: Algebra,
    mats: Vec<Matrix>,
}

fn numeric(s: &Scalar) -> Result<Gauss, UeaError> {
    s.as_constant().ok_or_else(|| UeaError::Rep(format!("structure constant {s} depends on parameters")))
}

impl Representation {
    /// Checks `[rho(X_i), rho(X_j)] = rho([X_i, X_j])` for every pair.
    pub fn new(alg: &Algebra, mats: Vec<Matrix>) -> Result<Self, UeaError> {
        if mats.len() != alg.dim() {
            return Err(UeaError::Rep(format!("{} matrices for a {}-dimensional algebra", mats.len(), alg.dim())));
        }
        let n = mats[0].dim();
        if mats.iter().any(|m| m.dim() != n) {
            return Err(UeaError::Rep("matrices of different sizes".into()));
        }
        for i in 0..alg.dim() {
            for j in i + 1..alg.dim() {
                let br = alg.bracket(i, j);
                let mut want = Matrix::identity(n).scale(&numeric(&br.constant)?);
                for (k, c) in &br.terms {
                    want = &want + &mats[*k].scale(&numeric(c)?);
                }
                if mats[i].commutator(&mats[j]) != want {
                    return Err(UeaError::Rep(format!("bracket [{}, {}] not represented", alg.label(i), alg.label(j))));
                }
            }
        }
        Ok(Representation { alg: alg.clone(), mats })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.mats[0].dim()
    }

    pub fn generator(&self, i: usize) -> &Matrix {
        &self.mats[i]
    }

    /// `rho (x) 1 + 1 (x) sigma`.
    pub fn tensor(&self, other: &Representation) -> Result<Representation, UeaError> {
        if self.alg.id() != other.alg.id() {
            return Err(UeaError::MixedAlgebra(self.alg.name().to_string(), other.alg.name().to_string()));
        }
        let (ia, ib) = (Matrix::identity(self.dim()), Matrix::identity(other.dim()));
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| &a.kron(&ib) + &ia.kron(b)).collect();
        Ok(Representation { alg: self.alg.clone(), mats })
    }

    pub fn direct_sum(&self, other: &Representation) -> Result<Representation, UeaError> {
        if self.alg.id() != other.alg.id() {
            return Err(UeaError::MixedAlgebra(self.alg.name().to_string(), other.alg.name().to_string()));
        }
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| a.direct_sum(b)).collect();
        Ok(Representation { alg: self.alg.clone(), mats })
    }
}

fn unit(n: usize, r: usize, c: usize) -> Matrix {
    Matrix::from_entries(n, &[(r, c, Gauss::one())])
}

/// The defining 3x3 representation of su(3): `X1 = i diag(1,-1,0)`,
/// `X2 = i diag(0,1,-1)`, and for each root pair `(a,b)` a real antisymmetric
/// generator `E_ab - E_ba` with its partner `i (E_ab + E_ba)`.
pub fn fundamental_su3(alg: &Algebra) -> Result<Representation, UeaError> {
    let i = Gauss::i();
    let diag = |d: [i64; 3]| Matrix::from_entries(3, &[0, 1, 2].map(|k| (k, k, &i * &Gauss::from_int(d[k]))));
    let anti = |a: usize, b: usize| &unit(3, a, b) - &unit(3, b, a);
    let sym = |a: usize, b: usize| (&unit(3, a, b) + &unit(3, b, a)).scale(&i);
    let mats =
        vec![diag([1, -1, 0]), diag([0, 1, -1]), anti(0, 1), sym(0, 1), anti(0, 2), sym(0, 2), anti(1, 2), sym(1, 2)];
    Representation::new(alg, mats)
}

/// `ad(X_i)_{k,j}` = coefficient of `X_k` in `[X_i, X_j]`. Requires a table
/// without constant terms.
pub fn adjoint(alg: &Algebra) -> Result<Representation, UeaError> {
    let n = alg.dim();
    let mut mats = Vec::with_capacity(n);
    for i in 0..n {
        let mut entries = Vec::new();
        for j in 0..n {
            let br = alg.bracket(i, j);
            if !br.constant.is_zero() {
                return Err(UeaError::Rep("adjoint of a table with constant terms".into()));
            }
            for (k, c) in &br.terms {
                entries.push((*k, j, numeric(c)?));
            }
        }
        mats.push(Matrix::from_entries(n, &entries));
    }
    Representation::new(alg, mats)
}

/// The affine representation of `k + V` for an abelian ideal `V` spanned
/// by the generators `ideal` with a complementary subalgebra `k`: elements
/// of `k` act on `V` by `ad`, elements of `V` act as translations on
/// `V + C`.
pub fn affine(alg: &Algebra, ideal: &[usize]) -> Result<Representation, UeaError> {
    let slot = |k: usize| ideal.iter().position(|&v| v == k);
    let n = ideal.len() + 1;
    let mut mats = Vec::with_capacity(alg.dim());
    for i in 0..alg.dim() {
        let mut entries = Vec::new();
        if let Some(si) = slot(i) {
            entries.push((si, n - 1, Gauss::one()));
        }
        for (sj, &j) in ideal.iter().enumerate() {
            let br = alg.bracket(i, j);
            if !br.constant.is_zero() {
                return Err(UeaError::Rep("affine representation of a table with constant terms".into()));
            }
            for (k, c) in &br.terms {
                let sk = slot(*k).ok_or_else(|| UeaError::Rep(format!("{} does not span an ideal", alg.label(j))))?;
                entries.push((sk, sj, numeric(c)?));
            }
        }
        mats.push(Matrix::from_entries(n, &entries));
    }
    // the bracket check rejects a non-abelian V or a k that is not closed
    Representation::new(alg, mats)
}

/// Image of `p` under `rep`, with parameters evaluated at `point`.
pub fn eval_in_rep(p: &EAElement, rep: &Representation, point: &ParamPoint) -> Result<Matrix, UeaError> {
    if p.algebra().id() != rep.alg.id() {
        return Err(UeaError::MixedAlgebra(p.algebra().name().to_string(), rep.alg.name().to_string()));
    }
    let n = rep.dim();
    let mut powers: Vec<Vec<Matrix>> = rep.mats.iter().map(|m| vec![Matrix::identity(n), m.clone()]).collect();
    let mut acc = Matrix::zero(n);
    for (m, c) in p.terms() {
        let mut prod: Option<Matrix> = None;
        for (g, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            while powers[g].len() <= e as usize {
                let next = &powers[g][powers[g].len() - 1] * &rep.mats[g];
                powers[g].push(next);
            }
            let f = &powers[g][e as usize];
            prod = Some(match prod {
                None => f.clone(),
                Some(p) => &p * f,
            });
        }
        let coeff = c.eval(point);
        let term = match prod {
            None => Matrix::identity(n).scale(&coeff),
            Some(p) => p.scale(&coeff),
        };
        acc = &acc + &term;
    }
    Ok(acc)
}
