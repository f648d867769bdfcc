//! Exhaustive invariant suites at small sizes, run by `regen selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use regen_core::matrix::for_each_subset;
use regen_core::psrs::{PsrsCode, PsrsGenPoly, PsrsMessage};
use regen_core::{Field, Fragment, OpCounter, Scheme};

use crate::codec::{Codec, CodecKind, Retrieval};
use crate::format::FragmentFile;

pub type SuiteResult = Result<(), String>;

/// A named suite and its outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub result: SuiteResult,
}

/// A named self-test suite.
pub type Suite = (&'static str, fn() -> SuiteResult);

pub fn suites() -> Vec<Suite> {
    vec![
        ("field axioms", field_axioms as fn() -> SuiteResult),
        ("psrs any-subset decoding", psrs_subsets),
        ("codec repair and reconstruction", codec_round_trips),
        ("fragment files", fragment_files),
    ]
}

pub fn run_selftest() -> Vec<SuiteOutcome> {
    suites()
        .into_iter()
        .map(|(name, f)| SuiteOutcome { name, result: f() })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> SuiteResult {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random(rng: &mut ChaCha8Rng, field: &Field, len: usize) -> Vec<u32> {
    (0..len).map(|_| rng.gen_range(0..field.order())).collect()
}

fn field_axioms() -> SuiteResult {
    let fields = [Field::prime(7), Field::prime(11), Field::binary(2), Field::binary(4)];
    for f in fields {
        let f = f.map_err(|e| e.to_string())?;
        let q = f.order();
        for a in 0..q {
            if a != 0 {
                let inv = f.inv(a).map_err(|e| e.to_string())?;
                ensure(f.mul(a, inv) == 1, || format!("GF({q}): {a}·{a}⁻¹ ≠ 1"))?;
            }
            ensure(f.add(a, f.neg(a)) == 0, || format!("GF({q}): {a} − {a} ≠ 0"))?;
            for b in 0..q {
                ensure(f.mul(a, b) == f.mul(b, a), || format!("GF({q}): mul not commutative"))?;
                ensure(f.add(a, b) == f.add(b, a), || format!("GF({q}): add not commutative"))?;
                for c in 0..q {
                    ensure(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)), || format!("GF({q}): mul not associative"))?;
                    ensure(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)), || format!("GF({q}): add not associative"))?;
                    ensure(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)), || {
                        format!("GF({q}): not distributive at ({a},{b},{c})")
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn psrs_subsets() -> SuiteResult {
    let f = Field::prime(11).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ops = OpCounter::new();
    for n in 2..=7 {
        for d in 1..n {
            for k in 1..=d {
                let eval = PsrsCode::new(f, n, k, d).map_err(|e| e.to_string())?;
                let poly = PsrsGenPoly::new(f, n, k, d).map_err(|e| e.to_string())?;
                let msg = PsrsMessage::new(random(&mut rng, &f, k), random(&mut rng, &f, d - k));
                let words = [
                    eval.encode(&msg, &ops).map_err(|e| e.to_string())?,
                    poly.encode(&msg, &ops).map_err(|e| e.to_string())?,
                ];
                let mut err = None;
                for_each_subset(n, d, |s| {
                    let pick = |w: &[u32]| s.iter().map(|&p| (p, w[p])).collect::<Vec<_>>();
                    let a = eval.decode_full(&pick(&words[0]), &ops);
                    let b = poly.decode_full(&pick(&words[1]), &ops);
                    if a.as_ref() != Ok(&msg) || b.as_ref() != Ok(&msg) {
                        err = Some(format!("({n},{k},{d}) full decode failed at {s:?}"));
                    }
                    err.is_none()
                });
                for_each_subset(n, k, |s| {
                    let pick = |w: &[u32]| s.iter().map(|&p| (p, w[p])).collect::<Vec<_>>();
                    let a = eval.decode_partial(&pick(&words[0]), &msg.b, &ops);
                    let b = poly.decode_partial(&pick(&words[1]), &msg.b, &ops);
                    if a.as_ref() != Ok(&msg.a) || b.as_ref() != Ok(&msg.a) {
                        err = Some(format!("({n},{k},{d}) partial decode failed at {s:?}"));
                    }
                    err.is_none()
                });
                if let Some(e) = err {
                    return Err(e);
                }
            }
        }
    }
    Ok(())
}

/// Every repair from every helper set and every reconstruction from every
/// k-subset, for each codec and download scheme.
pub fn check_codec(codec: &Codec, u: &[u32]) -> SuiteResult {
    let ops = OpCounter::new();
    let p = codec.params();
    let name = format!("{} ({},{},{}) over GF({})", codec.kind(), p.n, p.k, p.d, codec.field().order());
    let frags = codec.encode(u, &ops).map_err(|e| format!("{name}: {e}"))?;
    let mut err = None;
    for failed in 0..p.n {
        let others: Vec<usize> = (0..p.n).filter(|&i| i != failed).collect();
        for_each_subset(others.len(), p.d, |s| {
            let responses: Result<Vec<(usize, u32)>, _> = s
                .iter()
                .map(|&i| codec.helper_symbol(&frags[others[i]], failed, &ops).map(|v| (others[i], v)))
                .collect();
            let repaired = responses.and_then(|r| codec.repair(&r, failed, &ops));
            if repaired.as_ref().ok() != Some(&frags[failed]) {
                err = Some(format!("{name}: repair of node {failed} failed"));
            }
            err.is_none()
        });
    }
    let schemes: Vec<Retrieval> = match codec.kind() {
        CodecKind::Rbt | CodecKind::RbtSys => vec![Retrieval::Full, Retrieval::Partial(Scheme::Balanced)],
        CodecKind::MbrPsrs => vec![
            Retrieval::Full,
            Retrieval::Partial(Scheme::Lower),
            Retrieval::Partial(Scheme::Upper),
            Retrieval::Timeshare,
        ],
        CodecKind::MbrVdm => vec![
            Retrieval::Full,
            Retrieval::Partial(Scheme::Lower),
            Retrieval::Partial(Scheme::Upper),
            Retrieval::Partial(Scheme::Gong),
            Retrieval::Timeshare,
        ],
        CodecKind::Shah => vec![Retrieval::Full],
    };
    for_each_subset(p.n, p.k, |s| {
        let sel: Vec<Fragment> = s.iter().map(|&i| frags[i].clone()).collect();
        for &r in &schemes {
            let rounds = if r == Retrieval::Timeshare { 2 } else { 1 };
            for round in 0..rounds {
                let out = match r {
                    Retrieval::Full => codec.reconstruct(&sel, &ops),
                    _ => codec.plan(s, r, round).and_then(|plan| {
                        if plan.total_symbols() != p.b {
                            return Err(regen_core::Error::PlanPayloadMismatch("plan is not B symbols".into()).into());
                        }
                        let payloads = plan.extract(&sel)?;
                        codec.reconstruct_partial(&plan, &payloads, &ops)
                    }),
                };
                if out.as_deref().ok() != Some(u) {
                    err = Some(format!("{name}: {r} reconstruction from {s:?} failed"));
                }
            }
        }
        err.is_none()
    });
    err.map_or(Ok(()), Err)
}

fn codec_round_trips() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let fields = [Field::prime(7), Field::binary(3), Field::binary(4)];
    for f in fields {
        let f = f.map_err(|e| e.to_string())?;
        for n in 2..=6 {
            for k in 1..n {
                for kind in [CodecKind::Rbt, CodecKind::RbtSys, CodecKind::Shah] {
                    match Codec::new(kind, f, n, k, None) {
                        Ok(codec) => check_codec(&codec, &random(&mut rng, &f, codec.params().b))?,
                        Err(e) if e.kind() == "FieldTooSmall" => {}
                        Err(e) => return Err(format!("{kind} ({n},{k}): {e}")),
                    }
                }
                for d in k..n {
                    for kind in [CodecKind::MbrPsrs, CodecKind::MbrVdm] {
                        let codec = Codec::new(kind, f, n, k, Some(d)).map_err(|e| format!("{kind} ({n},{k},{d}): {e}"))?;
                        check_codec(&codec, &random(&mut rng, &f, codec.params().b))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn fragment_files() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let fields = [Field::prime(7), Field::binary(8), Field::binary(16), Field::prime(257)];
    for f in fields.into_iter().map(|f| f.map_err(|e| e.to_string())).chain([Ok(Field::fermat())]) {
        let f = f?;
        let codec = Codec::new(CodecKind::MbrPsrs, f, 6, 3, Some(4)).map_err(|e| e.to_string())?;
        let u = random(&mut rng, &f, codec.params().b);
        for frag in codec.encode(&u, &OpCounter::new()).map_err(|e| e.to_string())? {
            let file = FragmentFile::new(&codec, frag);
            let back = file.to_bytes().and_then(|b| FragmentFile::from_bytes(&b)).map_err(|e| e.to_string())?;
            ensure(back == file, || format!("GF({}) fragment file did not round-trip", f.order()))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        for outcome in run_selftest() {
            assert_eq!(outcome.result, Ok(()), "{}", outcome.name);
        }
    }
}
