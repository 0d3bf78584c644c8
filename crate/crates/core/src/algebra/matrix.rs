//! Division-free characteristic polynomials and determinants (Berkowitz).

/// Commutative ring operations on an external element type.
pub trait Ring {
    type E: Clone;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;

    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        self.add(a, &self.neg(b))
    }
}

/// Coefficients of `det(X*I - m)` from the leading `1` down to the constant.
pub fn charpoly<R: Ring>(ring: &R, m: &[Vec<R::E>]) -> Vec<R::E> {
    let n = m.len();
    let mut p: Vec<R::E> = vec![ring.one()];
    for r in 1..=n {
        let k = r - 1;
        // leading block A = m[0..k][0..k], column S = m[0..k][k], row R = m[k][0..k]
        let mut col: Vec<R::E> = (0..k).map(|i| m[i][k].clone()).collect();
        let mut c: Vec<R::E> = Vec::with_capacity(r + 1);
        c.push(ring.one());
        c.push(ring.neg(&m[k][k]));
        for _ in 0..k {
            // -R * A^j * S
            let mut acc = ring.zero();
            for (i, s) in col.iter().enumerate() {
                acc = ring.add(&acc, &ring.mul(&m[k][i], s));
            }
            c.push(ring.neg(&acc));
            let next: Vec<R::E> = (0..k)
                .map(|i| {
                    let mut a = ring.zero();
                    for (j, s) in col.iter().enumerate() {
                        a = ring.add(&a, &ring.mul(&m[i][j], s));
                    }
                    a
                })
                .collect();
            col = next;
        }
        // p_new = T * p, T lower-triangular Toeplitz (r+1) x r with first column c
        let mut q: Vec<R::E> = Vec::with_capacity(r + 1);
        for i in 0..=r {
            let mut acc = ring.zero();
            for (j, pj) in p.iter().enumerate() {
                if i >= j {
                    acc = ring.add(&acc, &ring.mul(&c[i - j], pj));
                }
            }
            q.push(acc);
        }
        p = q;
    }
    p
}

pub fn determinant<R: Ring>(ring: &R, m: &[Vec<R::E>]) -> R::E {
    let n = m.len();
    let cp = charpoly(ring, m);
    if n % 2 == 0 {
        cp[n].clone()
    } else {
        ring.neg(&cp[n])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Int;
    impl Ring for Int {
        type E = i64;
        fn zero(&self) -> i64 {
            0
        }
        fn one(&self) -> i64 {
            1
        }
        fn add(&self, a: &i64, b: &i64) -> i64 {
            a + b
        }
        fn neg(&self, a: &i64) -> i64 {
            -a
        }
        fn mul(&self, a: &i64, b: &i64) -> i64 {
            a * b
        }
    }

    fn det_laplace(m: &[Vec<i64>]) -> i64 {
        if m.len() == 1 {
            return m[0][0];
        }
        (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det_laplace(&minor)
            })
            .sum()
    }

    #[test]
    fn matches_cofactor_expansion() {
        let m = vec![vec![2, -1, 3, 0], vec![1, 4, -2, 5], vec![0, 3, 1, -1], vec![7, 0, 2, 2]];
        assert_eq!(determinant(&Int, &m), det_laplace(&m));
        let cp = charpoly(&Int, &[vec![1, 2], vec![3, 4]]);
        assert_eq!(cp, vec![1, -5, -2]);
    }
}
