//! Acceptance criteria 1–10, one PASS/FAIL line each. Runs without the libtest harness so
//! the lines always print; exits non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use mixvol_core::criteria::{
    best_deficit_bound, essential_b_direction, strict_monotonicity_equal, strict_monotonicity_general,
    volume_deficit_bound, Witness,
};
use mixvol_core::error::Error;
use mixvol_core::fixtures::{self, random_equal_instance, random_nested_instance};
use mixvol_core::lattice::PrimitiveVector;
use mixvol_core::mixed::{
    mixed_volume, mixed_volume_inductive, mixed_volume_polarization, mixed_volume_subdivision, normalized_mixed_volume,
    Method,
};
use mixvol_core::polytope::{touches, Polytope};
use mixvol_core::rational::{factorial, Int, Point, Rat};
use mixvol_core::system::{ber_check, analyze_system, failure_linkage, SparseSystem};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn rat(k: i64) -> Rat {
    Rat::from_integer(Int::from(k))
}

/// `n! V` by each of the three algorithms separately.
fn three_ways(ps: &[Polytope]) -> Result<[Rat; 3], String> {
    let n = ps.len();
    let f = Rat::from_integer(factorial(n));
    let a = mixed_volume_polarization(ps).map_err(|e| e.to_string())? * &f;
    let b = mixed_volume_subdivision(ps, 0).map_err(|e| e.to_string())? * &f;
    let c = Rat::from_integer(mixed_volume_inductive(ps).map_err(|e| e.to_string())?);
    Ok([a, b, c])
}

fn agreed(ps: &[Polytope]) -> Result<Rat, String> {
    let [a, b, c] = three_ways(ps)?;
    ensure!(a == b && b == c, "algorithms disagree: {a} {b} {c}");
    Ok(a)
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    let e = t.elapsed();
    ensure!(e < limit, "took {e:?}, limit {limit:?}");
    Ok(())
}

fn face_vertices(w: &Witness) -> Option<Vec<Point>> {
    match w {
        Witness::Face { vertices, .. } => {
            let mut v = vertices.clone();
            v.sort();
            Some(v)
        }
        _ => None,
    }
}

fn c1() -> Outcome {
    let t = Instant::now();
    let ps = fixtures::pentagon_equal();
    let q = fixtures::pentagon();
    let mv = agreed(&ps)?;
    ensure!(mv == rat(6), "normalized mixed volume {mv}");
    ensure!(common::mv2_polytopes(&ps) == 6, "oracle disagrees");
    ensure!(q.normalized_volume() == rat(6), "2!Vol(Q) = {}", q.normalized_volume());
    let v = strict_monotonicity_equal(&ps, &q).map_err(|e| e.to_string())?;
    ensure!(!v.strict, "verdict strict");
    let ber = ber_check(&fixtures::pentagon_equal_system()).map_err(|e| e.to_string())?;
    ensure!(ber.pass, "rank condition fails");
    for f in &ber.faces {
        let want = if f.dim == 1 { 2 } else { 1 };
        ensure!(f.rank_c == want && f.rank_abar == want, "face {:?} has ranks {} {}", f.labels, f.rank_c, f.rank_abar);
    }
    within(t, Duration::from_secs(1))?;
    Ok(format!("MV = 6 = 2!Vol(Q) by all methods, strict=false, edge ranks 2, vertex ranks 1 ({:?})", t.elapsed()))
}

fn c2() -> Outcome {
    let t = Instant::now();
    let ps = fixtures::pentagon_strict();
    let q = fixtures::pentagon();
    let v = strict_monotonicity_equal(&ps, &q).map_err(|e| e.to_string())?;
    ensure!(v.strict, "verdict not strict");
    let want = vec![vec![rat(1), rat(2)], vec![rat(2), rat(1)]];
    ensure!(face_vertices(&v.witness) == Some(want), "witness {:?}", v.witness);
    let s = fixtures::pentagon_strict_system();
    let ber = ber_check(&s).map_err(|e| e.to_string())?;
    let bad: Vec<_> = ber.failing().map(|f| (f.labels.clone(), f.rank_c, f.rank_abar)).collect();
    ensure!(bad == vec![(vec![2, 3], 1, 2)], "failing faces {bad:?}");
    let mv = agreed(&ps)?;
    ensure!(mv < rat(6), "MV {mv} not below 6");
    ensure!(Rat::from_integer(Int::from(common::mv2_polytopes(&ps))) == mv, "oracle disagrees");
    within(t, Duration::from_secs(1))?;
    Ok(format!("strict=true at edge {{2,3}}, rank C_F=1 < rank A_F=2, MV = {mv} < 6 ({:?})", t.elapsed()))
}

fn c3() -> Outcome {
    let t = Instant::now();
    let s = fixtures::prism_system();
    let vb = s.volume_bound().map_err(|e| e.to_string())?;
    ensure!(vb == Int::from(3), "3!Vol(Q) = {vb}");
    let ber = ber_check(&s).map_err(|e| e.to_string())?;
    let f = ber.faces.iter().find(|f| f.labels == [5, 6]).ok_or("no face {5,6}")?;
    ensure!(!f.pass && f.rank_c == 1 && f.rank_abar == 2, "ranks {} {}", f.rank_c, f.rank_abar);
    ensure!(
        ber.conclusion.contains("strictly less than n!Vol(Q) isolated solutions or infinitely many"),
        "conclusion: {}",
        ber.conclusion
    );
    within(t, Duration::from_secs(1))?;
    Ok(format!("3!Vol(Q) = 3, face {{5,6}} has rank C_F = 1 < 2, conclusion emitted ({:?})", t.elapsed()))
}

fn c4() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut eq_strict, mut eq_total) = (0, 0);
    for (n, m, count) in [(2, 5, 200), (3, 3, 50)] {
        for k in 0..count {
            let (ps, q) = random_equal_instance(&mut rng, n, m);
            let v = strict_monotonicity_equal(&ps, &q).map_err(|e| e.to_string())?;
            let truth = normalized_mixed_volume(&ps).map_err(|e| e.to_string())? < q.normalized_volume();
            ensure!(v.strict == truth, "equal-polytope criterion wrong on instance {k} in dimension {n}");
            eq_strict += usize::from(truth);
            eq_total += 1;
        }
    }
    let (mut gen_strict, mut gen_total) = (0, 0);
    for (n, m, count) in [(2, 5, 200), (3, 3, 50)] {
        for k in 0..count {
            let (ps, qs) = random_nested_instance(&mut rng, n, m);
            let v = strict_monotonicity_general(&ps, &qs).map_err(|e| e.to_string())?;
            let truth = normalized_mixed_volume(&ps).map_err(|e| e.to_string())?
                < normalized_mixed_volume(&qs).map_err(|e| e.to_string())?;
            ensure!(v.strict == truth, "general criterion wrong on instance {k} in dimension {n}");
            let w = essential_b_direction(&ps, &qs).map_err(|e| e.to_string())?;
            ensure!(w.strict == v.strict, "B-polytope criterion disagrees on instance {k} in dimension {n}");
            gen_strict += usize::from(truth);
            gen_total += 1;
        }
    }
    within(t, Duration::from_secs(300))?;
    Ok(format!(
        "equal: {eq_total} instances ({eq_strict} strict); nested: {gen_total} instances ({gen_strict} strict); B-polytope criterion agrees ({:?})",
        t.elapsed()
    ))
}

fn c5() -> Outcome {
    let t = Instant::now();
    let mut count = 0;
    for (name, ps) in fixtures::collections() {
        let r = mixed_volume(&ps, Method::All, 0).map_err(|e| format!("{name}: {e}"))?;
        ensure!(r.runs.len() == 3 && r.agree(), "{name}: runs {:?}", r.runs);
        count += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, m, total) in [(2, 5, 200), (3, 3, 50)] {
        for k in 0..total {
            let ps = fixtures::random_collection(&mut rng, n, m);
            let mv = agreed(&ps).map_err(|e| format!("instance {k} in dimension {n}: {e}"))?;
            if n == 2 {
                ensure!(mv == rat(common::mv2_polytopes(&ps)), "oracle disagrees on instance {k}");
            }
            count += 1;
        }
    }
    within(t, Duration::from_secs(300))?;
    Ok(format!("{count} collections, three algorithms equal, planar oracle equal ({:?})", t.elapsed()))
}

fn c6() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let nmv = |ps: &[Polytope]| normalized_mixed_volume(ps).map_err(|e| e.to_string());
    for (n, m) in [(2, 4), (2, 4), (3, 2)] {
        for _ in 0..20 {
            let ps = fixtures::random_collection(&mut rng, n, m);
            let base = nmv(&ps)?;
            let mut perm = ps.clone();
            perm.shuffle(&mut rng);
            ensure!(nmv(&perm)? == base, "symmetry");
            let moved: Vec<Polytope> = ps
                .iter()
                .map(|p| p.translate(&(0..n).map(|_| rat(rng.gen_range(-5..=5))).collect::<Vec<_>>()))
                .collect();
            ensure!(nmv(&moved)? == base, "translation invariance");
            let p = &ps[0];
            ensure!(nmv(&vec![p.clone(); n])? == p.normalized_volume(), "diagonal");
            // Scaling one argument scales the mixed volume.
            let mut scaled = ps.clone();
            scaled[0] = ps[0].dilate(&rat(2));
            ensure!(nmv(&scaled)? == &base * rat(2), "homogeneity");
        }
    }
    for _ in 0..30 {
        let a = fixtures::random_collection(&mut rng, 2, 3);
        let b = fixtures::random_lattice_polytope(&mut rng, 2, 3, 3);
        let sum = a[0].minkowski_sum(&b).map_err(|e| e.to_string())?;
        let lhs = nmv(&[sum, a[1].clone()])?;
        let rhs = nmv(&a)? + nmv(&[b, a[1].clone()])?;
        ensure!(lhs == rhs, "multilinearity");
    }
    for (n, m) in [(2, 5), (3, 3)] {
        for _ in 0..25 {
            let (ps, qs) = random_nested_instance(&mut rng, n, m);
            ensure!(nmv(&ps)? <= nmv(&qs)?, "monotonicity");
        }
    }
    Ok(format!(
        "symmetry, translation, diagonal, homogeneity, multilinearity, monotonicity ({:?})",
        t.elapsed()
    ))
}

fn c7() -> Outcome {
    let t = Instant::now();
    let (ps, q) = fixtures::square_bottom_edge();
    let v = PrimitiveVector::from_i64(&[0, 1]).unwrap();
    let b = volume_deficit_bound(&ps, &q, &v, &[0]).map_err(|e| e.to_string())?;
    ensure!(b.bound == Int::from(1) && b.deficit == Int::from(1), "bound {} deficit {}", b.bound, b.deficit);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut hits, mut tries) = (0, 0);
    while hits < 60 && tries < 5000 {
        tries += 1;
        let (n, m) = if tries % 4 == 0 { (3, 2) } else { (2, 4) };
        let (ps, q) = random_equal_instance(&mut rng, n, m);
        let normals: Vec<Vec<Int>> = q.facets().iter().map(|f| f.normal.clone()).collect();
        let u = normals.choose(&mut rng).unwrap();
        let v = PrimitiveVector::new(u.clone()).map_err(|e| e.to_string())?;
        if let Some(b) = best_deficit_bound(&ps, &q, &v).map_err(|e| e.to_string())? {
            let deficit = q.normalized_volume() - mixed_volume_polarization(&ps).unwrap() * Rat::from_integer(factorial(n));
            ensure!(deficit == Rat::from_integer(b.deficit.clone()), "deficit mismatch");
            ensure!(deficit >= Rat::from_integer(b.bound.clone()), "deficit {deficit} < bound {}", b.bound);
            hits += 1;
        }
    }
    ensure!(hits >= 50, "only {hits} random instances met the hypotheses");

    for n in [2usize, 3] {
        let q = fixtures::standard_simplex(n);
        let origin = Polytope::from_points(vec![vec![rat(0); n]]).unwrap();
        let mut ps = vec![q.clone(); n];
        ps[0] = origin.clone();
        ps[1] = origin;
        let v = PrimitiveVector::new(vec![Int::from(1); n]).unwrap();
        match volume_deficit_bound(&ps, &q, &v, &[0, 1]) {
            Err(Error::Hypothesis(m)) if m.contains("essential") => {}
            other => return Err(format!("simplex counterexample not rejected: {other:?}")),
        }
    }
    Ok(format!(
        "square/bottom edge bound 1 = deficit 1; {hits} random instances hold; simplex counterexample rejected ({:?})",
        t.elapsed()
    ))
}

fn minors_nonzero(s: &SparseSystem) -> bool {
    let c: Vec<Vec<_>> = s.coefficients().to_rows().iter().map(|r| r.iter().map(common::to_q).collect()).collect();
    let (n, l) = (c.len(), c[0].len());
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let m: Vec<Vec<_>> = c.iter().map(|r| idx.iter().map(|&j| r[j]).collect()).collect();
        if common::det(&m) == num_rational::Ratio::from(0) {
            return false;
        }
        let mut i = n;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if idx[i] < l - n + i {
                idx[i] += 1;
                for k in i + 1..n {
                    idx[k] = idx[k - 1] + 1;
                }
                break;
            }
        }
    }
}

fn c8() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 0..120 {
        let (n, m, size) = if k % 3 == 0 { (3, 2, 6) } else { (2, 3, 5) };
        let s = fixtures::random_cramer_system(&mut rng, n, m, size);
        ensure!(minors_nonzero(&s), "sample {k} has a vanishing minor");
        let r = analyze_system(&s, 0).map_err(|e| e.to_string())?;
        ensure!(r.cramer == Some(true) && r.ber.as_ref().is_some_and(|b| b.pass), "sample {k} fails");
        let note = format!("maximal number n!Vol(Q) = {}", r.volume_bound);
        ensure!(r.conclusions.iter().any(|c| c.contains(&note)), "sample {k} lacks the count annotation");
    }
    let r = analyze_system(&fixtures::dense_linear_system(), 0).map_err(|e| e.to_string())?;
    ensure!(r.cramer == Some(true) && r.volume_bound == Int::from(1), "dense linear system");
    ensure!(r.conclusions.iter().any(|c| c.contains("maximal number n!Vol(Q) = 1 ")), "count annotation 1 missing");
    Ok(format!("120 random dense systems pass with the maximal count; linear system count 1 ({:?})", t.elapsed()))
}

fn check_linkage(s: &SparseSystem) -> Result<usize, String> {
    let ber = ber_check(s).map_err(|e| e.to_string())?;
    let q = s.support_polytope().unwrap();
    let mut checked = 0;
    for f in ber.failing() {
        let link = failure_linkage(s, f).map_err(|e| e.to_string())?;
        ensure!(link.l.determinant().unwrap() != rat(0), "L is singular");
        ensure!(link.l.mul(s.coefficients()).unwrap() == *link.transformed.coefficients(), "L C mismatch");
        let ps = link.transformed.newton_polytopes().unwrap();
        let face = q.face_in_direction(&f.normal);
        let touching: Vec<usize> = (0..s.n()).filter(|&i| touches(&ps[i], &q, &face).unwrap()).collect();
        ensure!(touching.len() <= f.dim, "face {:?} touched by {touching:?}", f.labels);
        ensure!(link.rows.len() >= s.n() - f.dim, "too few avoiding rows");
        let v = strict_monotonicity_equal(&ps, &q).map_err(|e| e.to_string())?;
        ensure!(v.strict, "criterion not strict after transformation");
        let direct = normalized_mixed_volume(&ps).unwrap() < q.normalized_volume();
        ensure!(direct, "transformed mixed volume is not below n!Vol(Q)");
        checked += 1;
    }
    Ok(checked)
}

fn c9() -> Outcome {
    let t = Instant::now();
    let mut faces = 0;
    for (name, s) in fixtures::systems() {
        faces += check_linkage(&s).map_err(|e| format!("{name}: {e}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut systems = 0;
    while systems < 50 {
        let (n, m, size) = if systems % 3 == 0 { (3, 2, 6) } else { (2, 3, 6) };
        let Some(s) = fixtures::random_failing_system(&mut rng, n, m, size) else { continue };
        let k = check_linkage(&s).map_err(|e| format!("random system {systems}: {e}"))?;
        ensure!(k > 0, "random system {systems} did not fail");
        faces += k;
        systems += 1;
    }
    Ok(format!("{faces} failing faces over fixtures and 50 random systems linked end-to-end ({:?})", t.elapsed()))
}

fn c10() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for k in 0..100 {
        let (n, m) = if k % 2 == 0 { (2, 3) } else { (3, 2) };
        let size = rng.gen_range(n + 1..=n + 5);
        let support = fixtures::random_support(&mut rng, n, m, size);
        let chosen: Vec<usize> = (0..support.len()).collect::<Vec<_>>().choose_multiple(&mut rng, n).copied().collect();
        let to_pt = |x: &Vec<i64>| x.iter().map(|&c| rat(c)).collect::<Point>();
        let rest: Vec<Point> = (0..support.len()).filter(|j| !chosen.contains(j)).map(|j| to_pt(&support[j])).collect();
        let ps: Vec<Polytope> = chosen
            .iter()
            .map(|&j| {
                let mut pts = rest.clone();
                pts.push(to_pt(&support[j]));
                Polytope::from_points(pts).unwrap()
            })
            .collect();
        let q = Polytope::from_points(support.iter().map(to_pt).collect()).unwrap();
        let v = strict_monotonicity_equal(&ps, &q).map_err(|e| e.to_string())?;
        ensure!(!v.strict, "instance {k} reported strict");
        ensure!(normalized_mixed_volume(&ps).unwrap() == q.normalized_volume(), "instance {k}: MV below volume");
    }
    Ok(format!("100 random supports, all strict=false and MV = n!Vol(Q) ({:?})", t.elapsed()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("pentagon equality", c1),
        ("pentagon strict", c2),
        ("prism rank drop", c3),
        ("criteria vs direct comparison", c4),
        ("algorithm agreement", c5),
        ("mixed volume axioms", c6),
        ("facet deficit bound", c7),
        ("nonvanishing minors", c8),
        ("failure linkage", c9),
        ("one shared point per member", c10),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
