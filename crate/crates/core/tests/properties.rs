use std::sync::LazyLock;

use frobstrat::gfield::FieldSpec;
use frobstrat::localmodel::{tau_power, ModelSpec, TensorElement};
use frobstrat::polygon::{
    dominates, enumerate_destabilized_polygons, polygon_of_filtration, CurveParams, Dominance,
    FiltrationData, LatticePolygon,
};
use frobstrat::strata::dualize_polygon;
use proptest::prelude::*;

/// Random strictly convex polygon: integer pieces sorted by decreasing slope.
fn convex_polygon() -> impl Strategy<Value = LatticePolygon> {
    prop::collection::vec((1i64..4, -8i64..8), 1..5).prop_filter_map(
        "repeated slope",
        |mut pieces| {
            pieces.sort_by(|a, b| (b.1 * a.0).cmp(&(a.1 * b.0)));
            polygon_of_filtration(&FiltrationData { pieces }).ok()
        },
    )
}

fn field() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(vec![
        (2u32, 1usize),
        (3, 1),
        (3, 2),
        (5, 1),
        (2, 4),
        (3, 3),
        (7, 2),
    ])
    .prop_map(|(p, m)| FieldSpec::new(p, m, None).unwrap())
}

fn tensor(spec: ModelSpec) -> impl Strategy<Value = TensorElement> {
    let q = spec.field().order();
    prop::collection::vec((0usize..spec.left_len(), 0usize..spec.p(), 0..q), 0..6).prop_map(
        move |terms| {
            terms
                .into_iter()
                .fold(TensorElement::zero(&spec), |acc, (i, j, c)| {
                    let term =
                        TensorElement::monomial(&spec, i, j).scale(&spec.field().from_index(c));
                    acc.checked_add(&term).unwrap()
                })
        },
    )
}

/// Polygons sharing the endpoint (4, 0), with plenty of order relations among them.
static POOL: LazyLock<Vec<LatticePolygon>> = LazyLock::new(|| {
    let mut pool = enumerate_destabilized_polygons(&CurveParams::new(2, 3, 4, 0).unwrap()).unwrap();
    pool.push(LatticePolygon::straight(4, 0));
    pool
});

proptest! {
    #[test]
    fn filtration_round_trip(poly in convex_polygon()) {
        let back = polygon_of_filtration(&poly.to_filtration()).unwrap();
        prop_assert_eq!(back, poly);
    }

    #[test]
    fn dualizing_is_an_involution(poly in convex_polygon()) {
        let dual = dualize_polygon(&poly);
        let (r, d) = poly.endpoint();
        prop_assert_eq!(dual.endpoint(), (r, -d));
        let mut negated: Vec<_> = poly.slopes().into_iter().map(|s| -s).collect();
        negated.reverse();
        prop_assert_eq!(dual.slopes(), negated);
        prop_assert_eq!(dualize_polygon(&dual), poly);
    }

    #[test]
    fn dominance_is_a_partial_order(
        (a, b, c) in (0..POOL.len(), 0..POOL.len(), 0..POOL.len())
            .prop_map(|(i, j, k)| (POOL[i].clone(), POOL[j].clone(), POOL[k].clone()))
    ) {
        let geq = |x: &LatticePolygon, y: &LatticePolygon| {
            matches!(dominates(x, y).unwrap(), Dominance::GreaterOrEqual | Dominance::Equal)
        };
        let ab = dominates(&a, &b).unwrap();
        let flipped = match ab {
            Dominance::GreaterOrEqual => Dominance::LessOrEqual,
            Dominance::LessOrEqual => Dominance::GreaterOrEqual,
            other => other,
        };
        prop_assert_eq!(dominates(&b, &a).unwrap(), flipped);
        prop_assert_eq!(ab == Dominance::Equal, a == b);
        if geq(&a, &b) && geq(&b, &c) {
            prop_assert!(geq(&a, &c));
        }
    }

    #[test]
    fn slopes_strictly_decrease(poly in convex_polygon()) {
        let slopes = poly.slopes();
        prop_assert!(slopes.windows(2).all(|w| w[0] > w[1]));
        prop_assert_eq!(LatticePolygon::new(poly.vertices().to_vec()), Ok(poly));
    }

    #[test]
    fn field_axioms_on_samples(f in field(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let q = f.order();
        let (a, b, c) = (f.from_index(a % q), f.from_index(b % q), f.from_index(c % q));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        let p = f.characteristic() as u64;
        prop_assert_eq!((&a + &b).pow(p), &a.pow(p) + &b.pow(p));
        if !a.is_zero() {
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
            prop_assert!(a.pow(q - 1).is_one());
        }
    }

    #[test]
    fn tensor_ring_laws(
        (x, y, z) in prop::sample::select(vec![2u64, 3, 9])
            .prop_flat_map(|q| {
                let spec = ModelSpec::new(FieldSpec::of_order(q).unwrap(), 3).unwrap();
                (tensor(spec.clone()), tensor(spec.clone()), tensor(spec))
            })
    ) {
        prop_assert_eq!(x.checked_mul(&y).unwrap(), y.checked_mul(&x).unwrap());
        prop_assert_eq!(
            x.checked_mul(&y).unwrap().checked_mul(&z).unwrap(),
            x.checked_mul(&y.checked_mul(&z).unwrap()).unwrap()
        );
        prop_assert_eq!(
            x.checked_mul(&y.checked_add(&z).unwrap()).unwrap(),
            x.checked_mul(&y).unwrap().checked_add(&x.checked_mul(&z).unwrap()).unwrap()
        );
        // tau annihilates the p-th power: tau^p x = 0
        let p = x.spec().p();
        prop_assert!(tau_power(x.spec(), p).checked_mul(&x).unwrap().is_zero());
    }
}
