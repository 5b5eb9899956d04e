//! Cross-implementation check: every oracle must agree with a second, naively
//! written per-window double loop on 200 random series.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tinlab_oracles::{cci, ema, macd, obv, roc, rsi, sma, stoch_k, EmaMode, MaMode, MacdParams};

const EPS: f64 = 1e-12;
const TOL: f64 = 1e-12;

mod naive {
    //! Deliberately redundant double-loop implementations. Keep these dumb:
    //! every window is recomputed from scratch, scanning left to right.

    pub fn sma(v: &[f64], n: usize) -> Vec<f64> {
        let mut out = Vec::new();
        for end in (n - 1)..v.len() {
            let mut s = 0.0;
            for i in (end + 1 - n)..=end {
                s += v[i];
            }
            out.push(s / n as f64);
        }
        out
    }

    pub fn ema_truncated(v: &[f64], n: usize) -> Vec<f64> {
        let a = 2.0 / (n as f64 + 1.0);
        let mut out = Vec::new();
        for end in (n - 1)..v.len() {
            let mut norm = 0.0;
            for i in 0..n {
                norm += a * (1.0 - a).powi((n - 1 - i) as i32);
            }
            let mut acc = 0.0;
            for i in 0..n {
                let w = a * (1.0 - a).powi((n - 1 - i) as i32) / norm;
                acc += w * v[end + 1 - n + i];
            }
            out.push(acc);
        }
        out
    }

    pub fn ema_recursive(v: &[f64], n: usize) -> Vec<f64> {
        let a = 2.0 / (n as f64 + 1.0);
        let mut out = vec![v[0]];
        for t in 1..v.len() {
            let prev = out[t - 1];
            out.push(a * v[t] + (1.0 - a) * prev);
        }
        out
    }

    pub fn macd(
        v: &[f64],
        fast: usize,
        slow: usize,
        sig: usize,
        use_ema: bool,
        conventional: bool,
    ) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let ma = |n: usize| if use_ema { ema_truncated(v, n) } else { sma(v, n) };
        let fast_ma = ma(fast);
        let slow_ma = ma(slow);
        let mut line = Vec::new();
        for j in 0..slow_ma.len() {
            let f = fast_ma[j + (slow - fast)];
            let s = slow_ma[j];
            line.push(if conventional { f - s } else { s - f });
        }
        let signal = ema_truncated(&line, sig);
        let aligned = line[(sig - 1)..].to_vec();
        let hist: Vec<f64> = aligned.iter().zip(&signal).map(|(m, s)| m - s).collect();
        (aligned, signal, hist)
    }

    pub fn rsi(v: &[f64], n: usize, eps: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for end in n..v.len() {
            let mut gain = 0.0;
            let mut loss = 0.0;
            for i in (end - n)..end {
                let d = v[i + 1] - v[i];
                if d > 0.0 {
                    gain += d;
                } else {
                    loss += -d;
                }
            }
            let g = gain / n as f64;
            let l = loss / n as f64;
            out.push(100.0 * g / (g + l + eps));
        }
        out
    }

    pub fn roc(v: &[f64], n: usize, eps: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for t in n..v.len() {
            out.push(100.0 * (v[t] - v[t - n]) / (v[t - n] + eps));
        }
        out
    }

    pub fn stoch_k(h: &[f64], l: &[f64], c: &[f64], n: usize, eps: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for end in (n - 1)..c.len() {
            let mut hh = f64::NEG_INFINITY;
            let mut ll = f64::INFINITY;
            for i in (end + 1 - n)..=end {
                if h[i] > hh {
                    hh = h[i];
                }
                if l[i] < ll {
                    ll = l[i];
                }
            }
            out.push(100.0 * (c[end] - ll) / (hh - ll + eps));
        }
        out
    }

    pub fn cci(h: &[f64], l: &[f64], c: &[f64], n: usize, eps: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for end in (n - 1)..c.len() {
            let mut mean = 0.0;
            for i in (end + 1 - n)..=end {
                mean += (h[i] + l[i] + c[i]) / 3.0;
            }
            mean /= n as f64;
            let mut mad = 0.0;
            for i in (end + 1 - n)..=end {
                let tp = (h[i] + l[i] + c[i]) / 3.0;
                mad += (tp - mean).abs();
            }
            mad /= n as f64;
            let tp_end = (h[end] + l[end] + c[end]) / 3.0;
            out.push((tp_end - mean) / (0.015 * (mad + eps)));
        }
        out
    }

    pub fn obv(c: &[f64], v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0];
        for t in 1..c.len() {
            let prev = out[t - 1];
            let step = if c[t] > c[t - 1] {
                v[t]
            } else if c[t] < c[t - 1] {
                -v[t]
            } else {
                0.0
            };
            out.push(prev + step);
        }
        out
    }
}

fn assert_close(a: &[f64], b: &[f64], what: &str, case: usize) {
    assert_eq!(a.len(), b.len(), "{what} length mismatch in case {case}");
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        assert!(
            (x - y).abs() <= TOL,
            "{what} case {case} index {i}: {x} vs {y}"
        );
    }
}

fn random_prices(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let mut p = rng.random_range(20.0..200.0);
    (0..len)
        .map(|_| {
            p *= 1.0 + rng.random_range(-0.03..0.03);
            p
        })
        .collect()
}

fn random_bars(rng: &mut ChaCha8Rng, len: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
    let close = random_prices(rng, len);
    let mut high = Vec::with_capacity(len);
    let mut low = Vec::with_capacity(len);
    let mut vol = Vec::with_capacity(len);
    for &c in &close {
        let up: f64 = rng.random_range(0.0..0.02);
        let down: f64 = rng.random_range(0.0..0.02);
        high.push(c * (1.0 + up));
        low.push(c * (1.0 - down));
        vol.push(rng.random_range(0.0..1e6));
    }
    (high, low, close, vol)
}

#[test]
fn oracles_match_naive_double_loops_on_200_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240731);
    for case in 0..200 {
        let len = rng.random_range(40..120usize);
        let (high, low, close, vol) = random_bars(&mut rng, len);
        let n = rng.random_range(1..=13usize);

        assert_close(&sma(&close, n).unwrap(), &naive::sma(&close, n), "sma", case);
        assert_close(
            &ema(&close, n, EmaMode::Truncated).unwrap(),
            &naive::ema_truncated(&close, n),
            "ema truncated",
            case,
        );
        assert_close(
            &ema(&close, n, EmaMode::Recursive).unwrap(),
            &naive::ema_recursive(&close, n),
            "ema recursive",
            case,
        );

        let fast = rng.random_range(1..=6usize);
        let slow = fast + rng.random_range(1..=8usize);
        let sig = rng.random_range(1..=5usize);
        for (mode, use_ema) in [(MaMode::Sma, false), (MaMode::Ema, true)] {
            for conventional in [false, true] {
                let params = MacdParams { fast, slow, signal: sig, ma: mode, conventional_sign: conventional };
                let ours = macd(&close, &params).unwrap();
                let (m, s, h) = naive::macd(&close, fast, slow, sig, use_ema, conventional);
                assert_close(&ours.macd, &m, "macd line", case);
                assert_close(&ours.signal, &s, "macd signal", case);
                assert_close(&ours.histogram, &h, "macd histogram", case);
            }
        }

        assert_close(&rsi(&close, n, EPS).unwrap(), &naive::rsi(&close, n, EPS), "rsi", case);
        assert_close(&roc(&close, n, EPS).unwrap(), &naive::roc(&close, n, EPS), "roc", case);
        assert_close(
            &stoch_k(&high, &low, &close, n, EPS).unwrap(),
            &naive::stoch_k(&high, &low, &close, n, EPS),
            "stoch_k",
            case,
        );
        assert_close(
            &cci(&high, &low, &close, n, EPS).unwrap(),
            &naive::cci(&high, &low, &close, n, EPS),
            "cci",
            case,
        );
        assert_close(&obv(&close, &vol).unwrap(), &naive::obv(&close, &vol), "obv", case);
    }
}
