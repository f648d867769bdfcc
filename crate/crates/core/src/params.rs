use crate::error::{Error, Result};

/// The {n, k, d, α, β, B} tuple of a β = 1 minimum-bandwidth code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// Symbols stored per node.
    pub alpha: usize,
    /// Symbols sent by each helper during repair.
    pub beta: usize,
    /// Message length.
    pub b: usize,
}

/// B = k(k+1)/2 + k(d−k).
pub fn mbr_message_len(k: usize, d: usize) -> usize {
    k * (k + 1) / 2 + k * (d - k)
}

impl CodeParams {
    /// Product-matrix parameters: 1 ≤ k ≤ d ≤ n − 1, α = d.
    pub fn mbr(n: usize, k: usize, d: usize) -> Result<CodeParams> {
        if k == 0 || k > d || d + 1 > n {
            return Err(Error::ParamsInvalid(format!(
                "need 1 <= k <= d <= n-1, got n={n} k={k} d={d}"
            )));
        }
        Ok(CodeParams {
            n,
            k,
            d,
            alpha: d,
            beta: 1,
            b: mbr_message_len(k, d),
        })
    }

    /// Repair-by-transfer parameters: d = α = n − 1 and
    /// B = (n−1)k − k(k−1)/2.
    pub fn rbt(n: usize, k: usize) -> Result<CodeParams> {
        if n < 2 {
            return Err(Error::ParamsInvalid(format!("need n >= 2, got n={n}")));
        }
        let p = Self::mbr(n, k, n - 1)?;
        debug_assert_eq!(p.b, (n - 1) * k - k * (k - 1) / 2);
        Ok(p)
    }

    /// Symbols the data collector would fetch without partial downloading.
    pub fn full_download(&self) -> usize {
        self.k * self.alpha
    }
}
