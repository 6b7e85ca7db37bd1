//! Check spread, priority and conservation on every step of a random book.

use cda_core::engine::Engine;
use cda_core::properties::{check_all, record_transitions};
use cda_core::toolkit::generator::{gen_book, GenParams};

fn main() {
    let book = gen_book(&GenParams {
        n: 2_000,
        seed: 7,
        price_range: (90, 110),
        ..Default::default()
    })
    .unwrap();
    let transitions = record_transitions(&mut Engine::new(), &book.instructions).unwrap();
    let mut traded = 0;
    for (k, t) in transitions.iter().enumerate() {
        let v = check_all(t);
        assert!(v.all(), "step {} violates {v:?}", k + 1);
        traded += usize::from(!t.matching.is_empty());
    }
    println!("{} steps checked, {traded} with trades, all rules hold", transitions.len());
}
