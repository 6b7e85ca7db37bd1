//! The red-black ordered map on its own: inserts, removals, minimum
//! extraction, and the invariant check.

use cda_core::rbtree::OrderedMap;

fn main() {
    let mut map: OrderedMap<u32, &str> = OrderedMap::new();
    for (k, v) in [(5, "five"), (2, "two"), (8, "eight"), (1, "one"), (9, "nine")] {
        map.add(k, v).expect("fresh key");
    }
    assert!(map.add(5, "again").is_err(), "duplicate keys are rejected");

    println!("elements in key order: {:?}", map.elements());
    println!("remove(8) -> {:?}", map.remove(&8));
    println!("extract_min -> {:?}", map.extract_min());
    println!("min now -> {:?}", map.min());

    for k in 100..1100 {
        map.add(k, "filler").unwrap();
    }
    println!(
        "len {} height {} valid {} stats {:?}",
        map.len(),
        map.height(),
        map.validate(),
        map.stats()
    );
}
