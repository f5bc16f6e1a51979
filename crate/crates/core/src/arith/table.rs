use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::series::SeriesId;
use crate::error::{Error, Result};

/// Largest table size `sieve_build` accepts.
pub const SIEVE_GUARD: u64 = 100_000_000;

/// Largest k for which d_k is tabulated.
pub const MAX_DK: u32 = 16;

/// Smallest prime factor, μ, ω and d for every n ≤ limit.
///
/// The core arrays are fixed at construction; derived coefficient streams
/// (d_k, d(n²), …) are computed on first use and memoized.
#[derive(Debug)]
pub struct ArithmeticTable {
    limit: usize,
    spf: Vec<u32>,
    mu: Vec<i8>,
    omega: Vec<u8>,
    d: Vec<u32>,
    primes: Vec<u32>,
    dk: Mutex<HashMap<u32, Arc<Vec<u64>>>>,
    streams: Mutex<HashMap<SeriesId, Arc<Vec<f64>>>>,
}

/// Builds the table for 1..=n with a linear sieve.
pub fn sieve_build(n: u64) -> Result<ArithmeticTable> {
    if n == 0 {
        return Err(Error::InvalidArgument("sieve limit must be at least 1".into()));
    }
    if n > SIEVE_GUARD {
        return Err(Error::LimitExceeded {
            requested: n,
            max: SIEVE_GUARD,
        });
    }
    let n = n as usize;
    let mut spf = vec![0u32; n + 1];
    let mut mu = vec![0i8; n + 1];
    let mut omega = vec![0u8; n + 1];
    let mut d = vec![0u32; n + 1];
    let mut exp = vec![0u8; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    mu[1] = 1;
    d[1] = 1;
    spf[1] = 1;
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
            mu[i] = -1;
            omega[i] = 1;
            d[i] = 2;
            exp[i] = 1;
        }
        let spf_i = spf[i];
        for &p in &primes {
            let j = p as usize * i;
            if p > spf_i || j > n {
                break;
            }
            spf[j] = p;
            if p == spf_i {
                mu[j] = 0;
                omega[j] = omega[i];
                exp[j] = exp[i] + 1;
                let e = exp[i] as u32;
                d[j] = d[i] / (e + 1) * (e + 2);
            } else {
                mu[j] = -mu[i];
                omega[j] = omega[i] + 1;
                exp[j] = 1;
                d[j] = 2 * d[i];
            }
        }
    }
    Ok(ArithmeticTable {
        limit: n,
        spf,
        mu,
        omega,
        d,
        primes,
        dk: Mutex::new(HashMap::new()),
        streams: Mutex::new(HashMap::new()),
    })
}

impl ArithmeticTable {
    pub fn limit(&self) -> u64 {
        self.limit as u64
    }

    fn index(&self, n: u64) -> Result<usize> {
        if n == 0 || n > self.limit as u64 {
            return Err(Error::OutOfRange {
                n,
                limit: self.limit as u64,
            });
        }
        Ok(n as usize)
    }

    pub fn mu(&self, n: u64) -> Result<i8> {
        Ok(self.mu[self.index(n)?])
    }

    pub fn omega(&self, n: u64) -> Result<u8> {
        Ok(self.omega[self.index(n)?])
    }

    pub fn d(&self, n: u64) -> Result<u32> {
        Ok(self.d[self.index(n)?])
    }

    pub fn spf(&self, n: u64) -> Result<u32> {
        Ok(self.spf[self.index(n)?])
    }

    /// Primes up to the limit, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Prime factorization of n as (p, e) pairs with ascending p.
    pub fn factorize(&self, n: u64) -> Result<Vec<(u32, u32)>> {
        let mut m = self.index(n)?;
        let mut out: Vec<(u32, u32)> = Vec::new();
        while m > 1 {
            let p = self.spf[m];
            let mut e = 0;
            while m % p as usize == 0 {
                m /= p as usize;
                e += 1;
            }
            out.push((p, e));
        }
        Ok(out)
    }

    /// d_k(n) for every n ≤ limit (index 0 unused), by repeated Dirichlet
    /// convolution with the constant sequence.
    pub fn dk_table(&self, k: u32) -> Result<Arc<Vec<u64>>> {
        if k == 0 || k > MAX_DK {
            return Err(Error::InvalidArgument(format!("d_k needs 1 <= k <= {MAX_DK}, got {k}")));
        }
        if let Some(t) = self.dk.lock().expect("dk cache").get(&k) {
            return Ok(t.clone());
        }
        let table = if k == 1 {
            let mut v = vec![1u64; self.limit + 1];
            v[0] = 0;
            v
        } else {
            let prev = self.dk_table(k - 1)?;
            let mut v = vec![0u64; self.limit + 1];
            for m in 1..=self.limit {
                let a = prev[m];
                let mut j = m;
                while j <= self.limit {
                    v[j] += a;
                    j += m;
                }
            }
            v
        };
        let table = Arc::new(table);
        self.dk.lock().expect("dk cache").insert(k, table.clone());
        Ok(table)
    }

    /// φ(n) for the selected coefficient stream.
    pub fn coeff(&self, id: SeriesId, n: u64) -> Result<i64> {
        let i = self.index(n)?;
        Ok(match id {
            SeriesId::One => 1,
            SeriesId::Mu => self.mu[i] as i64,
            SeriesId::AbsMu => self.mu[i].unsigned_abs() as i64,
            SeriesId::Dk(k) => self.dk_table(k)?[i] as i64,
            SeriesId::TwoOmega => 1i64 << self.omega[i],
            SeriesId::DSqArg => self
                .factorize(n)?
                .iter()
                .map(|&(_, e)| 2 * e as i64 + 1)
                .product(),
            SeriesId::DSquared => {
                let d = self.d[i] as i64;
                d * d
            }
        })
    }

    /// φ(1..=limit) as doubles (index 0 holds 0).
    pub fn coefficients(&self, id: SeriesId) -> Result<Arc<Vec<f64>>> {
        id.validate()?;
        if let Some(v) = self.streams.lock().expect("stream cache").get(&id) {
            return Ok(v.clone());
        }
        let mut v = vec![0.0; self.limit + 1];
        match id {
            SeriesId::Dk(k) => {
                let t = self.dk_table(k)?;
                for n in 1..=self.limit {
                    v[n] = t[n] as f64;
                }
            }
            _ => {
                for (n, slot) in v.iter_mut().enumerate().skip(1) {
                    *slot = self.coeff(id, n as u64)? as f64;
                }
            }
        }
        let v = Arc::new(v);
        self.streams.lock().expect("stream cache").insert(id, v.clone());
        Ok(v)
    }

    /// Writes rows `n, mu, omega, d, d3, d4` for n = 1..=min(max_n, limit).
    pub fn write_csv<W: std::io::Write>(&self, writer: W, max_n: u64) -> Result<()> {
        let ser = |e: csv::Error| Error::Serialization(e.to_string());
        let d3 = self.dk_table(3)?;
        let d4 = self.dk_table(4)?;
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["n", "mu", "omega", "d", "d3", "d4"]).map_err(ser)?;
        for n in 1..=max_n.min(self.limit as u64) as usize {
            w.write_record([
                n.to_string(),
                self.mu[n].to_string(),
                self.omega[n].to_string(),
                self.d[n].to_string(),
                d3[n].to_string(),
                d4[n].to_string(),
            ])
            .map_err(ser)?;
        }
        w.flush().map_err(|e| Error::Serialization(e.to_string()))
    }
}
