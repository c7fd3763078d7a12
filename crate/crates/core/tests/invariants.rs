use mvf_core::field::random_element;
use mvf_core::gen::{random_point, random_proj};
use mvf_core::parse::{parse_element, parse_field};
use mvf_core::projective::{invert, proj_distance};
use mvf_core::rng::split;
use mvf_core::{q, AbsValue, Base, Field, ProjPoint, Q};
use proptest::prelude::*;

const SPECS: [&str; 6] = ["qp:2", "qp:5", "laurent:q", "puiseux:q", "trivial:q", "laurent:q:base=1/3"];

fn field(i: usize) -> Field {
    parse_field(SPECS[i % SPECS.len()]).unwrap()
}

fn exponent() -> impl Strategy<Value = Q> {
    (-40i64..40, 1i64..7).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn value_is_multiplicative(fi in 0usize..6, seed in any::<u64>()) {
        let f = field(fi);
        let mut rng = split(seed, &[1]);
        let (x, y) = (random_element(&f, &mut rng), random_element(&f, &mut rng));
        let lhs = x.mul(&y).value().unwrap();
        prop_assert_eq!(lhs, x.value().unwrap().mul(&y.value().unwrap()));
    }

    #[test]
    fn value_is_ultrametric(fi in 0usize..6, seed in any::<u64>()) {
        let f = field(fi);
        let mut rng = split(seed, &[2]);
        let (x, y) = (random_element(&f, &mut rng), random_element(&f, &mut rng));
        let (vx, vy) = (x.value().unwrap(), y.value().unwrap());
        let s = x.add(&y);
        let vs = s.value().unwrap();
        prop_assert!(vs <= AbsValue::max(&vx, &vy));
        if vx != vy {
            prop_assert_eq!(vs, AbsValue::max(&vx, &vy));
        }
    }

    #[test]
    fn exponents_add_and_order_reverses(a in exponent(), b in exponent(), den in 2u64..9) {
        let base = Base::new(1, den).unwrap();
        let (x, y) = (AbsValue::pow(base, a.clone()), AbsValue::pow(base, b.clone()));
        prop_assert_eq!(x.mul(&y).exponent().cloned(), Some(&a + &b));
        prop_assert_eq!(x.cmp(&y), b.cmp(&a));
        prop_assert_eq!(x.div(&y).unwrap().mul(&y), x);
    }

    #[test]
    fn projective_metric(fi in 0usize..6, n in 1usize..4, seed in any::<u64>()) {
        let f = field(fi);
        let mut rng = split(seed, &[3]);
        let p: Vec<ProjPoint> = (0..3).map(|_| random_proj(&f, n, &mut rng)).collect();
        let d = |i: usize, j: usize| proj_distance(&p[i], &p[j]).unwrap();
        prop_assert!(d(0, 0).is_zero());
        prop_assert_eq!(d(0, 1), d(1, 0));
        prop_assert!(d(0, 1) <= f.one_value());
        prop_assert!(d(0, 2) <= AbsValue::max(&d(0, 1), &d(1, 2)));
    }

    #[test]
    fn inversion_is_an_isometric_involution(fi in 0usize..6, seed in any::<u64>()) {
        let f = field(fi);
        let mut rng = split(seed, &[4]);
        let (x, y) = (random_point(&f, &mut rng), random_point(&f, &mut rng));
        prop_assert_eq!(invert(&invert(&x)), x.clone());
        prop_assert_eq!(proj_distance(&invert(&x), &invert(&y)).unwrap(), proj_distance(&x, &y).unwrap());
    }

    #[test]
    fn elements_print_and_parse_back(fi in 2usize..6, seed in any::<u64>()) {
        let f = field(fi);
        let x = random_element(&f, &mut split(seed, &[5]));
        let text = x.to_string();
        let back = parse_element(&f, &text).unwrap();
        prop_assert!(back.equals(&x), "{} parsed as {}", text, back);
    }

    #[test]
    fn field_specs_round_trip(fi in 0usize..6, prec in 4u32..40) {
        let f = field(fi).with_prec(prec);
        let g = parse_field(&f.spec_string()).unwrap();
        prop_assert_eq!(g.spec_string(), f.spec_string());
    }
}
