//! End-to-end acceptance checks. Runs without the libtest harness and prints
//! one `PASS`/`FAIL` line per criterion; exits nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;

use borromean::decide::{find_homomorphisms, todd_coxeter};
use borromean::icosa::{
    certify_a5_isomorphism, five_octahedra, icosahedron, rotation_group, AxisType,
};
use borromean::{
    check_relations, corpus, evaluate_word, smith_normal_form, Generator, GoldenNumber,
    IntegerMatrix, Letter, Permutation, PermutationGroup, Presentation, Word, DEFAULT_MAX_COSETS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn run(args: &[&str]) -> Result<(String, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_borromean"))
        .args(args)
        .output()
        .map_err(|e| format!("spawn failed: {e}"))?;
    Ok((
        String::from_utf8_lossy(&out.stdout).into_owned(),
        out.status.code().unwrap_or(-1),
    ))
}

fn run_ok(args: &[&str]) -> Result<String, String> {
    let (out, code) = run(args)?;
    ensure!(code == 0, "`{}` exited with {code}", args.join(" "));
    Ok(out.trim().to_string())
}

fn parse(text: &str) -> Result<Presentation, String> {
    Presentation::parse(text).map_err(|e| format!("{text}: {e}"))
}

fn order(p: &Presentation) -> Result<usize, String> {
    todd_coxeter(p, &[], DEFAULT_MAX_COSETS)
        .map(|t| t.index())
        .map_err(|e| e.to_string())
}

fn relator_set(p: &Presentation) -> BTreeSet<Word> {
    p.relators().iter().cloned().collect()
}

// Same relator set after some bijection of generator names.
fn equal_up_to_renaming(p: &Presentation, q: &Presentation) -> bool {
    let pg: Vec<String> = p
        .generators()
        .iter()
        .map(|g| g.name().to_string())
        .collect();
    let qg: Vec<String> = q
        .generators()
        .iter()
        .map(|g| g.name().to_string())
        .collect();
    if pg.len() != qg.len() || p.relators().len() != q.relators().len() {
        return false;
    }
    let target = relator_set(q);
    permutations(qg.len()).into_iter().any(|perm| {
        let map: BTreeMap<String, String> = perm
            .iter()
            .enumerate()
            .map(|(i, &j)| (pg[i].clone(), qg[j].clone()))
            .collect();
        // rename through temporary names so swaps do not collide
        let tmp: BTreeMap<String, String> = pg
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), format!("Tmp{i}")))
            .collect();
        let back: BTreeMap<String, String> = pg
            .iter()
            .enumerate()
            .map(|(i, g)| (format!("Tmp{i}"), map[g].clone()))
            .collect();
        match p.rename(&tmp).and_then(|r| r.rename(&back)) {
            Ok(r) => relator_set(&r) == target,
            Err(_) => false,
        }
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn criterion_1() -> Check {
    let out = run_ok(&["wirtinger", "borromean.pd", "--simplify"])?;
    let p = parse(&out)?;
    ensure!(p.generators().len() == 3, "expected 3 generators: {p}");
    ensure!(p.relators().len() == 3, "expected 3 relators: {p}");
    let expected = corpus::borromean_complement();
    ensure!(
        equal_up_to_renaming(&p, &expected),
        "{p} differs from {expected}"
    );
    let family = expected
        .word("Y*Z*Y^-1*X*Y*Z^-1*Y^-1*Z*X^-1*Z^-1")
        .map_err(|e| e.to_string())?;
    ensure!(
        p.relators().contains(&family.relator_normal_form()),
        "{p} lacks YZY^-1XYZ^-1Y^-1ZX^-1Z^-1"
    );
    Ok(())
}

fn criterion_2() -> Check {
    for (file, expected) in [
        ("unlink3.pd", "Z^3"),
        ("borromean.pd", "Z^3"),
        ("borromean_complement.pres", "Z^3"),
        ("poincare.pres", "trivial"),
        ("poincare_xy.pres", "trivial"),
        ("poincare_ab.pres", "trivial"),
    ] {
        let out = run_ok(&["h1", file])?;
        ensure!(out == expected, "h1 {file}: got {out}, expected {expected}");
    }
    Ok(())
}

fn criterion_3() -> Check {
    let out = run_ok(&["surgery", "borromean.pd", "-f", "-1,-1,-1"])?;
    let p = parse(&out)?;
    let expected = corpus::poincare_six_relator();
    ensure!(p == expected, "surgery gave {p}, expected {expected}");
    for a in ["-1", "1"] {
        for b in ["-1", "1"] {
            for c in ["-1", "1"] {
                let f = format!("{a},{b},{c}");
                let p = parse(&run_ok(&["surgery", "unlink3.pd", "-f", &f])?)?;
                let n = order(&p)?;
                ensure!(n == 1, "unlink3 with framings {f} has order {n}");
            }
        }
    }
    Ok(())
}

fn criterion_4() -> Check {
    let puzzle = corpus::puzzle();
    let n = order(&puzzle)?;
    ensure!(n == 1, "puzzle group has order {n}");
    let out = run_ok(&["decide", "puzzle.pres"])?;
    ensure!(out == "order 1", "decide puzzle.pres printed {out}");
    Ok(())
}

fn criterion_5() -> Check {
    let p = corpus::poincare_ab();
    let a5 = PermutationGroup::alternating(5);
    let homs = find_homomorphisms(&p, &a5, true).map_err(|e| e.to_string())?;
    ensure!(!homs.is_empty(), "no surjection onto A5");
    let a = Permutation::parse_cycles("(153)", 5).map_err(|e| e.to_string())?;
    let b = Permutation::parse_cycles("(12)(34)", 5).map_err(|e| e.to_string())?;
    let assignment = BTreeMap::from([
        (Generator::new("A").unwrap(), a.clone()),
        (Generator::new("B").unwrap(), b.clone()),
    ]);
    ensure!(
        check_relations(&p, &assignment).map_err(|e| e.to_string())?,
        "A->(153), B->(12)(34) violates a relator"
    );
    ensure!(
        homs.iter().any(|h| h.assignment() == assignment),
        "A->(153), B->(12)(34) not among the surjections found"
    );
    ensure!(
        PermutationGroup::closure(5, &[a, b])
            .map_err(|e| e.to_string())?
            .order()
            == 60,
        "(153) and (12)(34) do not generate A5"
    );
    for q in [
        corpus::poincare_six_relator(),
        corpus::poincare_two_generator(),
        corpus::poincare_ab(),
    ] {
        let n = order(&q)?;
        ensure!(n == 120, "order {n} for {q}");
        ensure!(n % a5.order() == 0, "60 does not divide {n}");
    }
    let out = run_ok(&["decide", "poincare.pres"])?;
    ensure!(
        out.starts_with("order 120; surjection onto A5: "),
        "decide printed {out}"
    );
    Ok(())
}

fn criterion_6() -> Check {
    let out = run_ok(&[
        "distinguish",
        "unlink3.pd",
        "borromean.pd",
        "-f",
        "-1,-1,-1",
    ])?;
    let first = out.lines().next().unwrap_or_default();
    ensure!(first == "DIFFERENT (order 1 vs order 120)", "printed {out}");
    let rev = run_ok(&[
        "distinguish",
        "borromean.pd",
        "unlink3.pd",
        "-f",
        "-1,-1,-1",
    ])?;
    ensure!(
        rev.starts_with("DIFFERENT (order 120 vs order 1)"),
        "reversed printed {rev}"
    );
    let same = run_ok(&["distinguish", "unlink3.pd", "unlink3.pd", "-f", "1,1,1"])?;
    ensure!(
        same.starts_with("INCONCLUSIVE"),
        "unlink3 vs itself printed {same}"
    );
    Ok(())
}

fn criterion_7() -> Check {
    let ico = icosahedron();
    ensure!(ico.counts() == (12, 30, 20), "counts {:?}", ico.counts());
    let four = GoldenNumber::int(4);
    for &(u, v) in &ico.edges {
        let d = ico.vertices[u] - ico.vertices[v];
        ensure!(
            d.norm2() == four,
            "edge {u}-{v} has squared length {}",
            d.norm2()
        );
    }
    let rots = rotation_group();
    let count = |axis: AxisType| rots.iter().filter(|c| c.axis == axis).count();
    let census = (
        count(AxisType::Vertex),
        count(AxisType::Edge),
        count(AxisType::Face),
        count(AxisType::Identity),
    );
    ensure!(census == (24, 15, 20, 1), "census {census:?}");

    let octa = five_octahedra();
    let mut all: Vec<_> = octa.iter().flatten().copied().collect();
    let mut mids = ico.doubled_edge_midpoints();
    all.sort_by_key(|p| p.coords().map(|x| (x.a, x.b)));
    mids.sort_by_key(|p| p.coords().map(|x| (x.a, x.b)));
    ensure!(
        all == mids,
        "octahedra do not partition the 30 edge midpoints"
    );
    for set in &octa {
        for k in 0..3 {
            ensure!(
                set[2 * k] == -set[2 * k + 1],
                "octahedron vertices not antipodal"
            );
            for l in k + 1..3 {
                ensure!(
                    set[2 * k].dot(set[2 * l]).is_zero(),
                    "octahedron axes not orthogonal"
                );
            }
        }
    }

    let cert = certify_a5_isomorphism();
    ensure!(
        cert.homomorphism_pairs_checked == 3600,
        "{} pairs",
        cert.homomorphism_pairs_checked
    );
    ensure!(cert.kernel_trivial, "kernel is not trivial");
    ensure!(cert.image_is_alternating, "image is not A5");
    ensure!(cert.holds(), "certificate does not hold");
    let axes = (
        cert.vertex_axis.to_string(),
        cert.face_axis.to_string(),
        cert.edge_axis.to_string(),
    );
    ensure!(
        axes == ("(12345)".into(), "(123)".into(), "(23)(45)".into()),
        "axes act as {axes:?}"
    );
    let kind = |p: &Permutation| {
        cert.table
            .iter()
            .find(|c| c.permutation == *p)
            .map(|c| c.axis)
    };
    ensure!(
        kind(&cert.vertex_axis) == Some(AxisType::Vertex),
        "vertex axis misclassified"
    );
    ensure!(
        kind(&cert.face_axis) == Some(AxisType::Face),
        "face axis misclassified"
    );
    ensure!(
        kind(&cert.edge_axis) == Some(AxisType::Edge),
        "edge axis misclassified"
    );
    let out = run_ok(&["icosa", "certify"])?;
    ensure!(
        out == "rotation group ~ A5 (order 60); labels: vertex-axis=(12345), face-axis=(123), edge-axis=(23)(45)",
        "icosa certify printed {out}"
    );
    ensure!(
        run_ok(&["icosa", "counts"])? == "V=12 E=30 F=20",
        "icosa counts"
    );
    Ok(())
}

fn criterion_8() -> Check {
    let p = |s: &str| Permutation::parse_cycles(s, 5).unwrap();
    let id = Permutation::identity(5);
    let (c153, c135, dbl, c12345) = (p("(153)"), p("(135)"), p("(12)(34)"), p("(12345)"));
    ensure!(c153.inverse() == c135, "(153)^-1 = {}", c153.inverse());
    ensure!(c153.power(3) == id, "(153)^3 = {}", c153.power(3));
    // (135) then (12)(34), read right to left
    let prod = c135.compose(&dbl).unwrap();
    ensure!(prod == c12345, "(135)(12)(34) = {prod}");
    ensure!(dbl.power(2) == id, "((12)(34))^2 = {}", dbl.power(2));
    ensure!(c12345.power(5) == id, "(12345)^5 = {}", c12345.power(5));
    let x = c153.inverse().compose(&dbl).unwrap().power(5);
    ensure!(
        x == c153.power(3) && x == dbl.power(2),
        "((153)^-1(12)(34))^5 = {x}"
    );
    // the same identities through word evaluation
    let ab = corpus::poincare_ab();
    let assignment = BTreeMap::from([
        (Generator::new("A").unwrap(), c153),
        (Generator::new("B").unwrap(), dbl),
    ]);
    for r in ab.relators() {
        let v = evaluate_word(r, &assignment).map_err(|e| e.to_string())?;
        ensure!(v.is_identity(), "relator {r} evaluates to {v}");
    }
    Ok(())
}

fn random_word(rng: &mut impl Rng, alphabet: &[Generator], max_len: usize) -> Word {
    let n = rng.gen_range(0..=max_len);
    Word::from_letters((0..n).map(|_| {
        let g = alphabet[rng.gen_range(0..alphabet.len())].clone();
        Letter::new(g, rng.gen_bool(0.5))
    }))
}

// Invariant factors from determinantal divisors: d_k = gcd of all k×k
// minors (cofactor expansion), factor_k = d_k / d_(k-1).
fn minor_det(m: &[Vec<i128>], rows: &[usize], cols: &[usize]) -> i128 {
    if rows.is_empty() {
        return 1;
    }
    let mut total = 0;
    for (j, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[rows[0]][c] * minor_det(m, &rows[1..], &rest);
    }
    total
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn invariant_factors(m: &[Vec<i128>], rows: usize, cols: usize) -> Vec<i128> {
    let mut out = Vec::new();
    let mut prev = 1;
    for k in 1..=rows.min(cols) {
        let mut d = 0;
        for r in combinations(rows, k) {
            for c in combinations(cols, k) {
                d = gcd(d, minor_det(m, &r, &c));
            }
        }
        if d == 0 {
            out.resize(rows.min(cols), 0);
            break;
        }
        out.push(d / prev);
        prev = d;
    }
    out
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let abc: Vec<Generator> = ["A", "B", "C"]
        .iter()
        .map(|n| Generator::new(n).unwrap())
        .collect();
    for _ in 0..10_000 {
        let u = random_word(&mut rng, &abc, 10);
        let v = random_word(&mut rng, &abc, 10);
        let w = random_word(&mut rng, &abc, 10);
        ensure!(
            u.concat(&v).concat(&w) == u.concat(&v.concat(&w)),
            "associativity: {u} {v} {w}"
        );
        ensure!(u.concat(&Word::identity()) == u, "identity: {u}");
        ensure!(u.concat(&u.invert()).is_identity(), "inverse: {u}");
        for g in &abc {
            ensure!(
                u.concat(&v).exponent_sum(g) == u.exponent_sum(g) + v.exponent_sum(g),
                "exponent sum of {g} in {u}·{v}"
            );
        }
    }

    let p = corpus::poincare_six_relator();
    let h1 = p.h1();
    for _ in 0..100 {
        let crazy = random_word(&mut rng, p.generators(), 10);
        let i = rng.gen_range(0..p.relators().len());
        let r = &p.relators()[i];
        let r = if rng.gen_bool(0.5) {
            r.clone()
        } else {
            r.invert()
        };
        let mut rels = p.relators().to_vec();
        rels[i] = crazy.concat(&r).concat(&crazy.invert());
        let q = Presentation::new(p.generators().to_vec(), rels).map_err(|e| e.to_string())?;
        ensure!(q.h1() == h1, "h1 changed under conjugation by {crazy}");
        let n = order(&q)?;
        ensure!(n == 120, "order {n} after conjugation by {crazy}");
    }

    for _ in 0..500 {
        let rows = rng.gen_range(1..=4);
        let cols = rng.gen_range(1..=4);
        let raw: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-5..=5)).collect())
            .collect();
        let wide: Vec<Vec<i128>> = raw
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let snf = smith_normal_form(&IntegerMatrix::from_rows(cols, &raw));
        let got: Vec<String> = snf.diagonal.iter().map(|d| d.to_string()).collect();
        let want: Vec<String> = invariant_factors(&wide, rows, cols)
            .iter()
            .map(|d| d.to_string())
            .collect();
        ensure!(got == want, "SNF of {raw:?}: {got:?} vs {want:?}");
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("Wirtinger presentation of the Borromean rings", criterion_1),
        ("homology chain", criterion_2),
        ("surgery pipeline", criterion_3),
        ("triviality puzzle", criterion_4),
        ("nontriviality certificate", criterion_5),
        ("unlink vs Borromean rings", criterion_6),
        ("icosahedron suite", criterion_7),
        ("permutation identities", criterion_8),
        ("property suites", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("PASS {} {name}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {} {name}: {e}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
