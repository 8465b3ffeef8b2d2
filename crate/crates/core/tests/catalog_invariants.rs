use korbit::catalog::Catalog;
use korbit::group::closure;
use korbit::norbit::{n_orbit, n_orbits_isomorphic};
use korbit::{Caps, Permutation, PermutationGroup};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn builtin() -> Catalog {
    Catalog::builtin(Caps::default()).unwrap()
}

#[test]
fn chain_order_matches_brute_force_closure() {
    for e in builtin().entries() {
        let g = e.group();
        if g.order() <= 5000 {
            let elements = closure(g.degree(), g.generators(), 5000).unwrap();
            assert_eq!(elements.len() as u128, g.order(), "{}", e.id());
            assert_eq!(elements, g.elements().unwrap(), "{}", e.id());
        }
    }
}

#[test]
fn orbit_stabilizer_everywhere() {
    for e in builtin().entries() {
        let g = e.group();
        for v in 0..g.degree() {
            let stab = g.point_stabilizer(v).unwrap();
            assert_eq!(g.orbit(v).len() as u128 * stab.order() as u128, g.order(), "{} at {v}", e.id());
        }
    }
}

#[test]
fn lagrange_across_lattices() {
    for e in builtin().entries() {
        let g = e.group();
        if g.order() > 500 {
            continue;
        }
        let lattice = g.subgroup_lattice().unwrap();
        for i in 0..lattice.len() {
            assert_eq!(g.order() % lattice.order(i) as u128, 0, "{}", e.id());
        }
        assert_eq!(lattice.order(lattice.len() - 1) as u128, g.order());
    }
}

#[test]
fn cycle_decomposition_rebuilds_every_element() {
    for e in builtin().entries() {
        let g = e.group();
        for x in g.elements().unwrap() {
            let rebuilt = Permutation::from_cycles(g.degree(), &x.cycle_decomposition()).unwrap();
            assert_eq!(&rebuilt, x);
            let reparsed = Permutation::parse_cycles(&x.to_string(), g.degree()).unwrap();
            assert_eq!(&reparsed, x);
        }
    }
}

#[test]
fn n_orbit_identities() {
    for e in builtin().entries() {
        let g = e.group();
        let x = n_orbit(g).unwrap();
        assert_eq!(x.row_count() as u128, g.order(), "{}", e.id());
        let aut = x.automorphism_group().unwrap();
        assert_eq!(aut.elements().unwrap(), g.elements().unwrap(), "{}", e.id());
        for v in 0..g.degree() {
            let column: Vec<usize> = x.k_projection(&[v]).unwrap().tuples().iter().map(|t| t[0]).collect();
            assert_eq!(column, g.orbit(v), "{} column {v}", e.id());
        }
    }
}

fn random_conjugate(g: &PermutationGroup, rng: &mut ChaCha8Rng) -> (Permutation, PermutationGroup) {
    let mut images: Vec<usize> = (0..g.degree()).collect();
    images.shuffle(rng);
    let s = Permutation::from_images(images).unwrap();
    let gens = g.generators().iter().map(|x| x.conjugate_by(&s)).collect();
    (s, PermutationGroup::generate(gens, g.degree()).unwrap())
}

#[test]
fn isomorphism_is_reflexive_symmetric_and_sees_conjugates() {
    let cat = builtin();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for e in cat.entries() {
        let g = e.group();
        let x = n_orbit(g).unwrap();
        assert!(n_orbits_isomorphic(&x, &x).is_isomorphic(), "{}", e.id());
        let (_, h) = random_conjugate(g, &mut rng);
        let y = n_orbit(&h).unwrap();
        let verdict = n_orbits_isomorphic(&x, &y);
        let s = verdict.witness().unwrap_or_else(|| panic!("{}: {verdict:?}", e.id()));
        let mapped: Vec<Permutation> = x.rows().iter().map(|r| r.conjugate_by(s)).collect();
        assert!(mapped.iter().all(|r| y.contains_row(r)), "{}", e.id());
        assert!(n_orbits_isomorphic(&y, &x).is_isomorphic());
    }
    // symmetric on unequal pairs of equal degree
    let pairs = [("C4", "C2xC2"), ("D4", "C4"), ("S3reg", "C6"), ("C8", "Q8")];
    for (a, b) in pairs {
        let x = n_orbit(cat.get(a).unwrap().group()).unwrap();
        let y = n_orbit(cat.get(b).unwrap().group()).unwrap();
        assert!(!n_orbits_isomorphic(&x, &y).is_isomorphic(), "{a} {b}");
        assert!(!n_orbits_isomorphic(&y, &x).is_isomorphic(), "{b} {a}");
    }
}
