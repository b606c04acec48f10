use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ome_cli::format::{parse, write, AnyMatroid, MatroidFile};
use ome_core::matroid::{gen, rank_table, Uniform};

fn random_file(i: usize, rng: &mut ChaCha8Rng) -> MatroidFile {
    let n = rng.random_range(0..=9);
    let dim = rng.random_range(1..=4);
    let matroid = match i % 6 {
        0 => AnyMatroid::LinearGf2(gen::random_gf2(n, dim, rng)),
        1 => AnyMatroid::LinearGfp(gen::random_gfp(n, [3, 5, 7, 11][i % 4], dim, rng)),
        2 => AnyMatroid::Graphic(gen::random_graph(rng.random_range(1..=5), n, rng)),
        3 => AnyMatroid::Laminar(gen::random_laminar(n, rng)),
        4 => AnyMatroid::Uniform(gen::random_uniform(n, rng)),
        _ => AnyMatroid::Explicit(gen::random_explicit(n, rng)),
    };
    let order = rng.random_bool(0.5).then(|| {
        let mut o: Vec<usize> = (0..n).collect();
        o.reverse();
        o
    });
    let weights = rng.random_bool(0.5).then(|| (0..n).map(|_| rng.random::<f64>()).collect());
    MatroidFile { name: format!("m{i}"), matroid, order, weights }
}

#[test]
fn serialized_matroids_parse_back_rank_identical() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..300 {
        let f = random_file(i, &mut rng);
        let text = write(&f);
        let back = parse(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(rank_table(&back.matroid), rank_table(&f.matroid), "{text}");
        assert_eq!(back.name, f.name);
        assert_eq!(back.order, f.order);
        assert_eq!(back.weights, f.weights);
        assert_eq!(write(&back), text);
    }
}

#[test]
fn free_is_full_rank_uniform() {
    let f = parse("matroid f\ntype free\nelements 4\n").unwrap();
    assert_eq!(f.matroid, AnyMatroid::Uniform(Uniform::free(4)));
}
