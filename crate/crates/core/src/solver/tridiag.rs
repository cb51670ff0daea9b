//! Symmetric cyclic tridiagonal systems with unit off-diagonal coupling,
//!
//! ```text
//! d_j x_j - x_{j-1} - x_{j+1} = b_j   (indices mod n)
//! ```
//!
//! solved by the Sherman-Morrison correction of a Thomas sweep. Every
//! periodic operator in the crate (implicit parabolic steps, the Helmholtz
//! resolvent) reduces to this form after multiplying through by `dx^2`.

/// Factorization of `diag(d) - shift_left - shift_right` (periodic).
#[derive(Debug, Clone)]
pub struct CyclicFactor {
    /// `1 / pivot_i` of the Thomas sweep on the bordered matrix.
    inv_pivot: Vec<f64>,
    /// Solution of `B z = u` for the Sherman-Morrison vector `u`.
    z: Vec<f64>,
    /// `v_last / (1 + v . z)` split into the two coefficients of `v . y`.
    v_last: f64,
    denom_inv: f64,
    work: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FactorError {
    TooSmall(usize),
    ZeroPivot(usize),
    Singular,
}

impl std::fmt::Display for FactorError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FactorError::TooSmall(n) => write!(f, "system size {n} < 3"),
            FactorError::ZeroPivot(i) => write!(f, "zero or non-finite pivot at row {i}"),
            FactorError::Singular => write!(f, "Sherman-Morrison denominator vanished"),
        }
    }
}

impl CyclicFactor {
    pub fn new(diag: &[f64]) -> Result<Self, FactorError> {
        let mut f = CyclicFactor {
            inv_pivot: Vec::new(),
            z: Vec::new(),
            v_last: 0.0,
            denom_inv: 0.0,
            work: Vec::new(),
        };
        f.refactor(diag)?;
        Ok(f)
    }

    pub fn len(&self) -> usize {
        self.inv_pivot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv_pivot.is_empty()
    }

    /// Re-factor in place, reusing the buffers.
    pub fn refactor(&mut self, diag: &[f64]) -> Result<(), FactorError> {
        let n = diag.len();
        if n < 3 {
            return Err(FactorError::TooSmall(n));
        }
        self.inv_pivot.resize(n, 0.0);
        self.z.resize(n, 0.0);

        // off-diagonals and corners are all e = -1
        let gamma = -diag[0];
        let e = -1.0;
        // B: first diagonal d0 - gamma, last d_{n-1} - e*e/gamma
        let mut pivot = diag[0] - gamma;
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(FactorError::ZeroPivot(0));
        }
        self.inv_pivot[0] = 1.0 / pivot;
        for i in 1..n {
            let b = if i == n - 1 {
                diag[i] - e * e / gamma
            } else {
                diag[i]
            };
            // cp_{i-1} = e * inv_pivot_{i-1}, pivot_i = b - e * cp_{i-1}
            pivot = b - self.inv_pivot[i - 1];
            if pivot == 0.0 || !pivot.is_finite() {
                return Err(FactorError::ZeroPivot(i));
            }
            self.inv_pivot[i] = 1.0 / pivot;
        }

        let mut u = std::mem::take(&mut self.work);
        u.clear();
        u.resize(n, 0.0);
        u[0] = gamma;
        u[n - 1] = e;
        let mut z = std::mem::take(&mut self.z);
        self.sweep(&u, &mut z);
        self.z = z;
        self.work = u;
        self.v_last = e / gamma;
        let denom = 1.0 + self.z[0] + self.v_last * self.z[n - 1];
        if denom == 0.0 || !denom.is_finite() {
            return Err(FactorError::Singular);
        }
        self.denom_inv = 1.0 / denom;
        Ok(())
    }

    /// Thomas sweep on the bordered matrix `B`.
    #[inline]
    fn sweep(&self, rhs: &[f64], out: &mut [f64]) {
        let n = rhs.len();
        let ip = &self.inv_pivot;
        // forward: y_i = (r_i - e y_{i-1}) / pivot_i with e = -1
        let mut prev = rhs[0] * ip[0];
        out[0] = prev;
        for i in 1..n {
            prev = (rhs[i] + prev) * ip[i];
            out[i] = prev;
        }
        // back: x_i = y_i - cp_i x_{i+1}, cp_i = -inv_pivot_i
        let mut next = out[n - 1];
        for i in (0..n - 1).rev() {
            next = out[i] + ip[i] * next;
            out[i] = next;
        }
    }

    /// Solve `A x = rhs`.
    pub fn solve(&self, rhs: &[f64], out: &mut [f64]) {
        let n = self.len();
        debug_assert_eq!(rhs.len(), n);
        debug_assert_eq!(out.len(), n);
        self.sweep(rhs, out);
        let factor = (out[0] + self.v_last * out[n - 1]) * self.denom_inv;
        for (x, z) in out.iter_mut().zip(&self.z) {
            *x -= factor * z;
        }
    }
}

/// `max_j |d_j x_j - x_{j-1} - x_{j+1} - b_j|`.
pub fn residual(diag: &[f64], x: &[f64], rhs: &[f64]) -> f64 {
    let n = diag.len();
    (0..n)
        .map(|j| {
            let l = x[(j + n - 1) % n];
            let r = x[(j + 1) % n];
            (diag[j] * x[j] - l - r - rhs[j]).abs()
        })
        .fold(0.0, f64::max)
}
