mod common;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use z3flow::classes::ClassKind;
use z3flow::face_rules::predict;
use z3flow::families::{gen_corpus, random_instances};
use z3flow::Instance;

fn with_second_face(inst: Instance, rng: &mut ChaCha8Rng) -> Instance {
    let fg = inst.specified_faces().fg;
    if inst.specified_faces().fgs.is_some() || fg.is_none() {
        return inst;
    }
    let faces = inst.faces();
    let others: Vec<_> = (0..faces.len()).map(|i| faces.handle(i)).filter(|&h| Some(h) != fg).collect();
    match others.choose(rng) {
        Some(&h) => inst.with_faces(fg, Some(h)).unwrap_or(inst),
        None => inst,
    }
}

#[test]
fn predictions_hold_along_mutation_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut pool = random_instances(32, 10, 300);
    pool.extend(gen_corpus(33, 12, ClassKind::Ft, 50));
    let mut checked = 0;
    for inst in pool {
        let mut cur = with_second_face(inst, &mut rng);
        for _ in 0..6 {
            if cur.specified_faces().fg.is_none() || cur.graph().vertex_count() < 2 {
                break;
            }
            let Some((m, child)) = common::random_mutation(&cur, &mut rng) else { continue };
            if common::edged_components(child.graph()) > common::edged_components(cur.graph()) {
                continue;
            }
            let pred = predict(&cur, &m).unwrap();
            assert!(pred.matches(&child), "{m:?}: {pred:?}\n{}", z3flow::format::write(&cur));
            assert!(common::euler_holds(child.graph()));
            checked += 1;
            cur = if rng.gen_bool(0.3) { with_second_face(child, &mut rng) } else { child };
        }
    }
    assert!(checked > 1000, "only {checked} mutations checked");
}
