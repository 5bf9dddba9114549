use nmds_core::complete::largeq::*;
use nmds_core::curves::Curve;
use nmds_core::field::Field;
use std::time::Instant;

fn main() {
    for q in [121u64, 157, 169, 179] {
        let f = Field::from_order(q).unwrap();
        let r = f.sqrt(f.from_int(3)).unwrap();
        let e = Curve::hesse(f, f.add(f.one(), r)).unwrap();
        let t0 = Instant::now();
        let rep = large_q_verdict(&e, 7).unwrap();
        println!(
            "q={q}: n={} verdict={:?} ident={} symmetric={} classes={} direct={} via_mirror={} unresolved={} mirror_classes={} repchecks={} [{:?}]",
            rep.n, rep.verdict, rep.normalization_identity, rep.symmetric,
            rep.classes_total, rep.eliminated_direct, rep.eliminated_via_mirror,
            rep.unresolved, rep.mirror_resolutions.len(), rep.representative_checks,
            t0.elapsed()
        );
    }
}
