use proptest::prelude::*;
use weightlab::conjugate::young_conjugate_at;
use weightlab::counterexample::{a_ladder, nonconvexity_certificate};
use weightlab::lpspace::{radial_grid, ExperimentGrids, SpaceType};
use weightlab::relations::default_ell_grid;
use weightlab::*;

fn rel_grid() -> GridSpec {
    GridSpec::logarithmic(1e-2, 1e8, 1201).unwrap()
}

/// Random nondecreasing profile with `n` corners after the origin.
fn profile_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.1f64..3.0, 0.0f64..4.0), 2..8).prop_map(|steps| {
        let mut c = vec![(0.0, 0.0)];
        let (mut u, mut v) = (0.0, 0.0);
        for (du, dv) in steps {
            u += du;
            v += dv;
            c.push((u, v));
        }
        c
    })
}

/// Same, with nondecreasing slopes (convex `φ`).
fn convex_profile_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.1f64..3.0, 0.0f64..2.0), 2..8).prop_map(|steps| {
        let mut c = vec![(0.0, 0.0)];
        let (mut u, mut v, mut slope) = (0.0, 0.0, 0.1);
        for (du, ds) in steps {
            slope += ds;
            u += du;
            v += slope * du;
            c.push((u, v));
        }
        c
    })
}

fn exponent_strategy() -> impl Strategy<Value = Exponent> {
    prop_oneof![Just(Exponent::Finite(1.0)), Just(Exponent::Finite(2.0)), Just(Exponent::Infinity)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evaluate_is_nonnegative_and_monotone(alpha in 0.05f64..3.0, lo in 1e-3f64..1.0) {
        let w = WeightFunction::power(alpha).unwrap();
        let g = GridSpec::logarithmic(lo, 1e6, 200).unwrap();
        let vals: Vec<f64> = g.t_points().unwrap().iter().map(|&t| w.evaluate(t).unwrap()).collect();
        prop_assert!(vals.iter().all(|v| *v >= 0.0));
        prop_assert!(vals.windows(2).all(|v| v[1] >= v[0]));
    }

    #[test]
    fn phi_matches_evaluate(alpha in 0.05f64..3.0, t in 1e-3f64..1e6) {
        for w in [WeightFunction::power(alpha).unwrap(), WeightFunction::log(), WeightFunction::gevrey(1.0 / alpha).unwrap()] {
            let a = w.evaluate(t).unwrap();
            let b = w.phi(t.ln()).unwrap();
            prop_assert!((a - b).abs() <= 1e-14 * a.abs().max(1e-300) + 1e-300, "{} at {t}: {a} vs {b}", w.label());
        }
    }

    #[test]
    fn normalize_is_within_omega_of_one(alpha in 0.1f64..2.0) {
        let w = WeightFunction::power(alpha).unwrap();
        let n = normalize(&w).unwrap();
        let bound = w.evaluate(1.0).unwrap();
        for t in GridSpec::logarithmic(1e-3, 1e6, 120).unwrap().t_points().unwrap() {
            prop_assert!((n.evaluate(t).unwrap() - w.evaluate(t).unwrap()).abs() <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn associated_function_is_convex_in_log(steps in prop::collection::vec(0.1f64..2.0, 6..30)) {
        // log M_p with increasing increments: a log-convex sequence.
        let mut logs = vec![0.0];
        let mut inc = 0.0;
        for s in steps {
            inc += s;
            logs.push(logs.last().unwrap() + inc);
        }
        let m = WeightSequence::from_logs(logs).unwrap();
        let u_max = m.safe_u_max() - 0.1;
        let us: Vec<f64> = (0..200).map(|i| -2.0 + (u_max + 2.0) * i as f64 / 199.0).collect();
        let ph: Vec<f64> = us.iter().map(|&u| associated_weight_function(&m, u.exp()).unwrap()).collect();
        prop_assert!(ph.windows(2).all(|v| v[1] >= v[0]));
        prop_assert!(ph.windows(3).all(|v| v[2] - 2.0 * v[1] + v[0] >= -1e-10));
    }

    #[test]
    fn om4_on_profiles_matches_brute_force(c in profile_strategy()) {
        let w = WeightFunction::profile(&c).unwrap();
        let v = check_condition(&w, ConditionId::Om4, &w.default_grid()).unwrap();
        // Midpoint convexity on corner pairs and their neighbours.
        let p = w.as_profile().unwrap();
        let mut convex = true;
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                let (a, b) = (c[i].0, c[j].0);
                if p.phi(0.5 * (a + b)) > 0.5 * (p.phi(a) + p.phi(b)) + 1e-12 {
                    convex = false;
                }
            }
        }
        prop_assert_eq!(v.is_holds(), convex);
    }

    #[test]
    fn condition_checks_are_deterministic(alpha in 0.1f64..2.0) {
        let w = WeightFunction::power(alpha).unwrap();
        let g = rel_grid();
        for c in [ConditionId::Om1, ConditionId::Om3, ConditionId::Om6] {
            prop_assert_eq!(check_condition(&w, c, &g).unwrap(), check_condition(&w, c, &g).unwrap());
        }
    }

    #[test]
    fn fenchel_young_on_profiles(c in convex_profile_strategy(), x_frac in 0.0f64..0.99, y in -2.0f64..20.0) {
        let w = WeightFunction::profile(&c).unwrap();
        let x = x_frac * w.as_profile().unwrap().final_slope();
        let star = young_conjugate_at(&w, x).unwrap().value;
        prop_assert!(x * y <= w.phi(y).unwrap() + star + 1e-8);
    }

    #[test]
    fn conjugate_over_x_is_nondecreasing(alpha in 0.2f64..1.5) {
        let w = WeightFunction::power(alpha).unwrap();
        let c = young_conjugate(&w, 50.0).unwrap();
        let q: Vec<f64> = c.samples.iter().filter(|s| s.x > 1e-2).map(|s| s.value / s.x).collect();
        prop_assert!(q.windows(2).all(|v| v[1] >= v[0] - 1e-9 * v[0].abs().max(1.0)));
    }

    #[test]
    fn conjugation_reverses_order(c in convex_profile_strategy(), bump in 0.0f64..2.0) {
        let lo = WeightFunction::profile(&c).unwrap();
        let hi_corners: Vec<(f64, f64)> = c.iter().map(|&(u, v)| (u, v + bump * u / (1.0 + u))).collect();
        let hi = WeightFunction::profile(&hi_corners).unwrap();
        let m = lo.as_profile().unwrap().final_slope().min(hi.as_profile().unwrap().final_slope());
        for k in 0..20 {
            let x = m * k as f64 / 20.0;
            let a = young_conjugate_at(&hi, x).unwrap().value;
            let b = young_conjugate_at(&lo, x).unwrap().value;
            prop_assert!(a <= b + 1e-9 * b.abs().max(1.0));
        }
    }

    #[test]
    fn associated_matrix_is_log_convex_and_monotone(alpha in 0.3f64..1.0, l1 in 0.25f64..2.0, f in 1.0f64..4.0) {
        let w = normalize(&WeightFunction::power(alpha).unwrap()).unwrap();
        let a = associated_weight_matrix(&w, l1, 12).unwrap();
        let b = associated_weight_matrix(&w, l1 * f, 12).unwrap();
        prop_assert!(a[0].abs() <= 1e-9);
        prop_assert!(a.windows(3).all(|v| v[2] - 2.0 * v[1] + v[0] >= -1e-7 * v[1].abs().max(1.0)));
        prop_assert!(a.iter().zip(&b).all(|(x, y)| *x <= y + 1e-7 * y.abs().max(1.0)));
    }

    #[test]
    fn kappa_is_nondecreasing(a in 0.1f64..0.9, y1 in 0.1f64..100.0, f in 1.0f64..10.0) {
        let w = WeightFunction::power(a).unwrap();
        let k1 = kappa(&w, y1, 1e6).unwrap().value().unwrap();
        let k2 = kappa(&w, y1 * f, 1e6).unwrap().value().unwrap();
        prop_assert!(k2 >= k1 * (1.0 - 1e-9));
    }
}

const ALPHAS: [f64; 5] = [0.25, 1.0 / 3.0, 0.5, 1.0, 2.0];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn power_truth_table(i in 0..ALPHAS.len(), j in 0..ALPHAS.len()) {
        let (a, b) = (ALPHAS[i], ALPHAS[j]);
        let (s, t) = (WeightFunction::power(a).unwrap(), WeightFunction::power(b).unwrap());
        let g = rel_grid();
        let pre = compare(&s, &t, Relation::Preceq, &g).unwrap().verdict;
        let tri = compare(&s, &t, Relation::Triangle, &g).unwrap().verdict;
        prop_assert_eq!(pre.is_holds(), b <= a);
        prop_assert_eq!(tri.is_holds(), b < a);
        prop_assert!(!(tri.is_holds() && pre.is_fails()));
    }

    #[test]
    fn exponential_matrices_reduce_to_preceq(i in 0..ALPHAS.len(), j in 0..ALPHAS.len()) {
        let (s, t) = (WeightFunction::power(ALPHAS[i]).unwrap(), WeightFunction::power(ALPHAS[j]).unwrap());
        let g = rel_grid();
        let want = compare(&s, &t, Relation::Preceq, &g).unwrap().verdict.status;
        let (ms, mt) = (WeightMatrix::exponential(s), WeightMatrix::exponential(t));
        let ells = default_ell_grid();
        for rel in [MatrixRelation::Beurling, MatrixRelation::Roumieu] {
            prop_assert_eq!(matrix_relation(&ms, &mt, rel, &ells, &g).unwrap().verdict.status, want);
        }
        let tri = matrix_relation(&ms, &mt, MatrixRelation::Triangle, &ells, &g).unwrap().verdict;
        if tri.is_holds() {
            prop_assert!(want == Status::Holds);
        }
    }

    #[test]
    fn norm_is_monotone_in_the_weight(p in exponent_strategy(), alpha in 0.2f64..1.0, c in 1.0f64..3.0, k in 0.5f64..4.0) {
        let g = radial_grid(50.0, 5001).unwrap();
        let f = SampledFunction::from_fn(g, 1, |t| (-k * t).exp()).unwrap();
        let base = WeightFunction::power(alpha).unwrap();
        let lo = weighted_norm(&f, &base, p).unwrap();
        let hi = weighted_norm(&f, &WeightFunction::scaled(c, base).unwrap(), p).unwrap();
        prop_assert!(lo.log_value <= hi.log_value + 1e-12);
    }

    #[test]
    fn norm_is_homogeneous(p in exponent_strategy(), c in 1e-3f64..1e3, k in 0.5f64..4.0) {
        let g = radial_grid(50.0, 5001).unwrap();
        let f = SampledFunction::from_fn(g, 1, |t| (-k * t * t).exp()).unwrap();
        let w = WeightFunction::power(0.5).unwrap();
        let a = weighted_norm(&f, &w, p).unwrap();
        let b = weighted_norm(&f.scaled(c).unwrap(), &w, p).unwrap();
        prop_assert!((b.log_value - a.log_value - c.ln()).abs() <= 1e-12 * a.log_value.abs().max(1.0));
    }

    #[test]
    fn theta_sup_norm_is_at_most_one(l in 0.1f64..4.0, frac in 0.05f64..1.0, alpha in 0.2f64..1.0) {
        let m = WeightMatrix::exponential(WeightFunction::power(alpha).unwrap());
        let g = radial_grid(1e3, 20_001).unwrap();
        let v = theta_membership(&m, Exponent::Infinity, l, l * frac, g).unwrap();
        let n = v.cert("norm").unwrap();
        prop_assert!(n <= 1.0);
        if frac == 1.0 {
            prop_assert_eq!(n, 1.0);
        }
    }

    #[test]
    fn staircase_mass_is_geometric(n in 2usize..12, p in prop_oneof![Just(1.0f64), Just(2.0)], alpha in 0.3f64..1.0) {
        let m = WeightMatrix::exponential(WeightFunction::power(alpha).unwrap());
        let (_, st) = staircase_witness(&m, Exponent::Finite(p), n, 1, &[1.0]).unwrap();
        prop_assert!((st.lp_mass - (1.0 - 2f64.powi(-(n as i32)))).abs() <= 1e-10);
    }

    #[test]
    fn delta_powers_stay_admissible(alpha in 0.05f64..1.0, n in 5usize..120) {
        let d = AdmissibleDelta::default_formula(n).unwrap();
        prop_assert!(d.power(alpha).is_ok());
    }

    #[test]
    fn constructions_verify(t1 in 0.05f64..0.95, j in 3usize..50, alpha in 0.3f64..1.0) {
        let d = AdmissibleDelta::default_formula(j + 1).unwrap().power(alpha).unwrap();
        let p = construct(&d, t1, j).unwrap();
        let b = verify_profile(&p).unwrap();
        prop_assert!(b.all_pass, "{:?}", b.failed().next());
        // x_j do not depend on δ.
        let q = construct(&AdmissibleDelta::default_formula(j + 1).unwrap(), t1, j).unwrap();
        prop_assert_eq!(&p.x, &q.x);
    }

    #[test]
    fn witnesses_have_positive_margin(a_max in 1.0f64..40.0) {
        let p = construct(&AdmissibleDelta::default_formula(61).unwrap(), 0.5, 60).unwrap();
        let ws = nonconvexity_certificate(&p, a_max).unwrap();
        prop_assert_eq!(ws.len(), a_ladder(a_max).len());
        prop_assert!(ws.iter().all(|w| w.lhs > w.rhs && w.margin > 0.0));
        prop_assert!(ws.windows(2).all(|w| w[1].j >= w[0].j));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn forward_inequality_on_random_related_pairs(i in 0..4usize, j in 0..4usize, p in exponent_strategy(), roumieu in any::<bool>()) {
        let fams = [
            WeightFunction::power(0.25).unwrap(),
            WeightFunction::power(0.5).unwrap(),
            WeightFunction::power(1.0).unwrap(),
            WeightFunction::gevrey(1.5).unwrap(),
        ];
        let s = WeightMatrix::exponential(fams[i].clone());
        let t = WeightMatrix::exponential(fams[j].clone());
        let space = if roumieu { SpaceType::Roumieu } else { SpaceType::Beurling };
        let grids = ExperimentGrids {
            relation: GridSpec::logarithmic(1e-3, 1e8, 1201).unwrap(),
            function: GridSpec::linear(0.0, 1e3, 10_001).unwrap(),
        };
        let r = inclusion_experiment(&s, &t, p, space, &default_ell_grid(), &grids).unwrap();
        if r.relation.verdict.is_holds() {
            prop_assert_eq!(r.forward_ok, Some(true), "{:?}", r.forward.iter().find(|row| !row.ok));
        }
    }
}
