//! Property-based tests for the exact polynomial and bead arithmetic.

use proptest::prelude::*;

use beadiag::laurent::{Bead, DeltaContext, LaurentPoly};
use beadiag::rational::Q;

fn laurent_strategy() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(((-6i64..=6), (-9i64..=9), (1i64..=4)), 0..5).prop_map(|terms| {
        LaurentPoly::from_terms(
            terms
                .into_iter()
                .map(|(e, n, d)| (e, Q::new(n.into(), d.into()))),
        )
    })
}

proptest! {
    #[test]
    fn conjugate_is_involutive(p in laurent_strategy()) {
        prop_assert_eq!(p.conjugate().conjugate(), p);
    }

    #[test]
    fn conjugate_is_ring_homomorphism(p in laurent_strategy(), q in laurent_strategy()) {
        prop_assert_eq!(p.mul(&q).conjugate(), p.conjugate().mul(&q.conjugate()));
        prop_assert_eq!(p.add(&q).conjugate(), p.conjugate().add(&q.conjugate()));
    }

    #[test]
    fn evaluation_at_one_is_a_homomorphism(p in laurent_strategy(), q in laurent_strategy()) {
        prop_assert_eq!(p.add(&q).eval_one(), p.eval_one() + q.eval_one());
        prop_assert_eq!(p.mul(&q).eval_one(), p.eval_one() * q.eval_one());
    }

    #[test]
    fn display_parse_roundtrip(p in laurent_strategy()) {
        let text = p.to_string();
        prop_assert_eq!(LaurentPoly::parse(&text).unwrap(), p);
    }

    #[test]
    fn bead_conjugation_is_involutive(p in laurent_strategy()) {
        for delta in ["1", "t - 1 + t^-1", "1/2 + 1/2 t"] {
            let ctx = DeltaContext::validate_alexander(
                &LaurentPoly::parse(delta).unwrap(),
            ).unwrap();
            let bead = Bead::new(p.clone(), ctx);
            prop_assert_eq!(bead.conjugate().conjugate(), bead);
        }
    }

    #[test]
    fn log_derivative_of_products(p in laurent_strategy(), q in laurent_strategy()) {
        // t (pq)' = (t p') q + p (t q'), checked on the unreduced pairs.
        prop_assume!(!p.is_zero() && !q.is_zero());
        let (np, dp) = p.log_derivative().unwrap();
        let (nq, dq) = q.log_derivative().unwrap();
        let (npq, dpq) = p.mul(&q).log_derivative().unwrap();
        // npq/dpq = np/dp + nq/dq, cross-multiplied.
        let lhs = npq.mul(&dp).mul(&dq);
        let rhs = np.mul(&dq).add(&nq.mul(&dp)).mul(&dpq);
        prop_assert_eq!(lhs, rhs);
    }
}
