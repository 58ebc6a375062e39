//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line.

use std::collections::BTreeSet;

use invform::arith::{smith_normal_form, Domain, Matrix, RingMap, Scalar};
use invform::centroid::centroid_ibf_bridge;
use invform::descent::{
    base_change_form, descend_form, pullback_form, split_check, twist, verify_functor_descent,
    verify_ibf_base_change, Cocycle, QuadGalois,
};
use invform::forms::{killing_form, matrix_trace_form, normalized_sl2_form, proportionality_constant, zorn_trace_form};
use invform::ibf::{check_ibf_principle, ibf_module, ibf_span, invariant_gram_space, unital_ac_isomorphism, BilinearForm};
use invform::module::{
    ac_module, associator_span, commutator_span, conjugation_map, is_perfect, mat, negative_transpose_map, sl,
    zero_algebra, zorn, Algebra, ModuleInvariants, Span,
};
use invform::multiloop::{graded_form, graded_uniqueness_certificate, killing_over_laurent, multiloop, MultiloopSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(criterion: u32, checks: &[(&str, bool)]) {
    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect();
    if failed.is_empty() {
        println!("criterion {criterion}: PASS");
    } else {
        println!("criterion {criterion}: FAIL ({})", failed.join(", "));
    }
    assert!(failed.is_empty(), "criterion {criterion} failed: {failed:?}");
}

fn q() -> Domain {
    Domain::Rationals
}

fn z() -> Domain {
    Domain::Integers
}

fn gf(p: u64) -> Domain {
    Domain::prime_field(p).unwrap()
}

fn laurent() -> Domain {
    Domain::laurent(q()).unwrap()
}

/// Killing form straight from structure constants: tr(ad bᵢ ∘ ad bⱼ).
fn killing_oracle(b: &Algebra) -> Matrix {
    let d = b.domain();
    let n = b.rank();
    let mut gram = Matrix::zeros(d, n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = d.zero();
            for k in 0..n {
                for l in 0..n {
                    acc = d.add(&acc, &d.mul(&b.product(i, l)[k], &b.product(j, k)[l]));
                }
            }
            gram[(i, j)] = acc;
        }
    }
    gram
}

fn free(rank: usize) -> ModuleInvariants {
    ModuleInvariants { torsion: vec![], free_rank: rank }
}

fn tensor(d: &Domain, n: usize, terms: &[(i64, usize, usize)]) -> Vec<Scalar> {
    let mut v = vec![d.zero(); n * n];
    for &(c, p, qq) in terms {
        v[p * n + qq] = d.add(&v[p * n + qq], &d.from_i64(c));
    }
    v
}

const E: usize = 0;
const H: usize = 1;
const F: usize = 2;

#[test]
fn criterion_01_sl2_gf2() {
    let b = sl(2, &gf(2)).unwrap();
    let ibf = ibf_module(&b);
    let inv = ibf.invariants().unwrap();
    let classes: BTreeSet<(usize, usize)> = ibf.basis_classes().unwrap().into_iter().collect();
    let expected: BTreeSet<(usize, usize)> = [(E, E), (F, F), (E, F), (F, E)].into_iter().collect();
    report(
        1,
        &[
            ("dimension 4", inv == free(4)),
            ("basis classes", classes == expected),
            ("forms count", invariant_gram_space(&b).unwrap().len() == 4),
        ],
    );
}

#[test]
fn criterion_02_sl2_rationals() {
    let d = q();
    let b = sl(2, &d).unwrap();
    let ibf = ibf_module(&b);
    let hh = ibf.quotient_map(&tensor(&d, 3, &[(1, H, H)])).unwrap();
    let gamma = normalized_sl2_form(&d).unwrap();
    report(
        2,
        &[
            ("dimension 1", ibf.invariants().unwrap() == free(1)),
            ("h⊗h generates", hh.len() == 1 && !d.is_zero(&hh[0])),
            ("principle for γ", check_ibf_principle(&gamma).unwrap().holds()),
        ],
    );
}

#[test]
fn criterion_03_sl2_integers() {
    let d = z();
    let b = sl(2, &d).unwrap();
    let listed = vec![
        tensor(&d, 3, &[(1, H, E)]),
        tensor(&d, 3, &[(1, E, H)]),
        tensor(&d, 3, &[(1, F, H)]),
        tensor(&d, 3, &[(1, H, F)]),
        tensor(&d, 3, &[(2, E, E)]),
        tensor(&d, 3, &[(2, F, F)]),
        tensor(&d, 3, &[(1, H, H), (-2, F, E)]),
        tensor(&d, 3, &[(1, H, H), (-2, E, F)]),
    ];
    let listed = Span::new(&d, 9, listed).unwrap();
    let computed = ibf_span(&b).unwrap();
    let inv = ibf_module(&b).invariants().unwrap();
    let expected = ModuleInvariants { torsion: vec![d.from_i64(2); 3], free_rank: 1 };
    // The displayed decomposition: (ℤ/2)ē⊗ē ⊕ (ℤ/2)f̄⊗f̄ ⊕ span{ē⊗f, f̄⊗e} with 2(e⊗f − f⊗e) = 0.
    let projective = inv.torsion.is_empty();
    let cyclic = inv.torsion.len() + inv.free_rank <= 1;
    let forms = ibf_module(&b).invariant_forms().unwrap();
    let gamma = normalized_sl2_form(&d).unwrap();
    let gamma_generates = forms.len() == 1 && (forms[0] == *gamma.gram() || forms[0] == gamma.gram().scale(&d.from_i64(-1)));
    let det = gamma.determinant();
    let multiples_ok = (1..=5).all(|k| {
        let f = BilinearForm::new(&b, gamma.gram().scale(&d.from_i64(k))).unwrap();
        f.is_invariant() && f.is_nondegenerate() && !f.is_nonsingular()
    });
    report(
        3,
        &[
            ("listed ⊆ computed", computed.contains_span(&listed).unwrap()),
            ("computed ⊆ listed", listed.contains_span(&computed).unwrap()),
            ("torsion (2,2,2) free rank 1", inv == expected),
            ("not projective", !projective),
            ("not cyclic", !cyclic),
            ("IBF dual is ℤγ", gamma_generates),
            ("det γ = ±2", det == d.from_i64(2) || det == d.from_i64(-2)),
            ("nondegenerate, not nonsingular", multiples_ok),
            ("principle fails", !check_ibf_principle(&gamma).unwrap().holds()),
        ],
    );
}

#[test]
fn criterion_04_killing_proportionality() {
    let mut checks = Vec::new();
    for d in [z(), q()] {
        let b = sl(2, &d).unwrap();
        let oracle = killing_oracle(&b);
        let kappa = killing_form(&b).unwrap();
        let gamma = normalized_sl2_form(&d).unwrap();
        let c = proportionality_constant(&oracle, gamma.gram());
        let agrees = c.as_ref().map(|c| *c == d.from_i64(12));
        println!(
            "  Killing constant over {d}: c = {} (literature 12, {})",
            c.as_ref().map_or("none".into(), ToString::to_string),
            match agrees {
                Some(true) => "agrees",
                Some(false) => "discrepancy",
                None => "not proportional",
            }
        );
        checks.push(kappa.gram() == &oracle);
        checks.push(c.is_some_and(|c| oracle == gamma.gram().scale(&c)));
    }
    report(
        4,
        &[
            ("library Killing matches ad-trace oracle", checks[0] && checks[2]),
            ("κ = c·γ entrywise", checks[1] && checks[3]),
        ],
    );
}

fn matrix_trace_oracle(d: &Domain, n: usize) -> Matrix {
    // tr(E_ij E_kl) = δ_jk δ_il, basis E_ij in row-major order.
    let mut g = Matrix::zeros(d, n * n, n * n);
    for a in 0..n * n {
        for b in 0..n * n {
            let (i, j, k, l) = (a / n, a % n, b / n, b % n);
            if j == k && i == l {
                g[(a, b)] = d.one();
            }
        }
    }
    g
}

#[test]
fn criterion_05_matrix_algebras() {
    let mut checks: Vec<(String, bool)> = Vec::new();
    for d in [z(), q()] {
        for n in [2, 3] {
            let a = mat(n, &d).unwrap();
            let t = matrix_trace_form(&a).unwrap();
            let det = t.determinant();
            let iso = unital_ac_isomorphism(&a).unwrap();
            let (_, ac) = ac_module(&a).unwrap();
            let tag = format!("M{n}({d})");
            checks.push((format!("{tag} trace Gram"), t.gram() == &matrix_trace_oracle(&d, n)));
            checks.push((format!("{tag} det unit"), d.is_unit(&det) && (d.is_field() || det == d.one() || det == d.from_i64(-1))));
            checks.push((format!("{tag} IBF ≅ R"), ibf_module(&a).invariants().unwrap() == free(1)));
            checks.push((format!("{tag} AC ≅ R"), ac.invariants().unwrap() == free(1)));
            checks.push((format!("{tag} μ̄ iso"), iso.inverse_pair && iso.mu.is_isomorphism().unwrap()));
            checks.push((format!("{tag} principle"), check_ibf_principle(&t).unwrap().holds()));
        }
    }
    let named: Vec<(&str, bool)> = checks.iter().map(|(s, b)| (s.as_str(), *b)).collect();
    report(5, &named);
}

fn zorn_oracle(d: &Domain) -> Matrix {
    // a = (α₁, α₂, u, x), b = (β₁, β₂, v, y): α₁β₁ + α₂β₂ − ᵗu y − ᵗx v.
    let tau = |a: &[i64], b: &[i64]| {
        a[0] * b[0] + a[1] * b[1] - (0..3).map(|i| a[2 + i] * b[5 + i] + a[5 + i] * b[2 + i]).sum::<i64>()
    };
    let unit = |i: usize| {
        let mut v = [0i64; 8];
        v[i] = 1;
        v
    };
    let mut g = Matrix::zeros(d, 8, 8);
    for i in 0..8 {
        for j in 0..8 {
            g[(i, j)] = d.from_i64(tau(&unit(i), &unit(j)));
        }
    }
    g
}

#[test]
fn criterion_06_zorn() {
    let mut checks: Vec<(String, bool)> = Vec::new();
    for d in [z(), q()] {
        let o = zorn(&d).unwrap();
        let tau = zorn_trace_form(&o).unwrap();
        let det = tau.determinant();
        let comm = commutator_span(&o).unwrap();
        let assoc = associator_span(&o).unwrap();
        let (ac, _) = ac_module(&o).unwrap();
        let forms = ibf_module(&o).invariant_forms().unwrap();
        let form_span = Span::new(&d, 64, forms.iter().map(|g| g.entries().to_vec()).collect()).unwrap();
        let tau_span = Span::new(&d, 64, vec![tau.gram().entries().to_vec()]).unwrap();
        let tag = format!("Zorn({d})");
        checks.push((format!("{tag} τ Gram"), tau.gram() == &zorn_oracle(&d)));
        checks.push((format!("{tag} det ±1"), det == d.one() || det == d.from_i64(-1)));
        checks.push((format!("{tag} [B,B] = (B,B,B)"), comm.equals(&assoc).unwrap()));
        checks.push((format!("{tag} = ac"), comm.equals(&ac).unwrap()));
        checks.push((format!("{tag} rank 7"), ac.rank().unwrap() == 7));
        checks.push((format!("{tag} IBF free rank 1"), ibf_module(&o).invariants().unwrap() == free(1)));
        checks.push((format!("{tag} τ basis"), form_span.equals(&tau_span).unwrap()));
        checks.push((format!("{tag} principle"), check_ibf_principle(&tau).unwrap().holds()));
    }
    let named: Vec<(&str, bool)> = checks.iter().map(|(s, b)| (s.as_str(), *b)).collect();
    report(6, &named);
}

#[test]
fn criterion_07_centroid_bridge() {
    let cases = [
        ("sl2(Q)", sl(2, &q()).unwrap()),
        ("sl2(GF2)", sl(2, &gf(2)).unwrap()),
        ("M2(Q)", mat(2, &q()).unwrap()),
        ("Zorn(Q)", zorn(&q()).unwrap()),
        ("zero3(Q)", zero_algebra(3, &q()).unwrap()),
    ];
    let mut checks = Vec::new();
    for (name, b) in &cases {
        let r = centroid_ibf_bridge(b).unwrap();
        // χ ↔ β: β(bᵢ, bⱼ) = χ(bᵢ)(bⱼ) makes each Gram the transpose of its χ.
        let matched = r.matching.len() == r.centroid_rank
            && r.matching.iter().all(|(chi, beta)| beta.gram() == &chi.transpose() && beta.is_invariant());
        checks.push((*name, r.centroid_rank == r.hom_rank && matched && r.passes()));
    }
    report(7, &checks);
}

fn quaternion_cocycle(a: &Algebra, d: i64) -> Cocycle {
    let g = QuadGalois::new(&q(), q().from_i64(d)).unwrap();
    let extended = a.base_change(&g.embedding()).unwrap();
    let m = Matrix::from_i64(g.ext(), &[&[0, 2], &[1, 0]]);
    Cocycle::new(&g, a, conjugation_map(&extended, &m).unwrap()).unwrap()
}

#[test]
fn criterion_08_quaternion_descent() {
    let a = sl(2, &q()).unwrap();
    let tf = twist(&a, &quaternion_cocycle(&a, 2)).unwrap();
    let b = tf.algebra();
    let kb = descend_form(&killing_form(&a).unwrap(), &tf).unwrap();
    let cert = verify_functor_descent(&tf).unwrap();
    report(
        8,
        &[
            ("3-dimensional Lie", b.rank() == 3 && b.is_lie()),
            ("split check", split_check(&tf).unwrap().verified),
            ("κ_B over ℚ", kb.domain() == &q()),
            ("κ_B nonsingular", kb.is_nonsingular()),
            ("κ_B = Killing of B", kb.gram() == &killing_oracle(b)),
            ("principle for κ_B", check_ibf_principle(&kb).unwrap().holds()),
            ("functor descent", cert.passes()),
            ("lattices rank 1", cert.twisted_ibf == free(1) && cert.descended == free(1)),
        ],
    );
}

#[test]
fn criterion_09_base_change() {
    let cases = [
        ("sl2 Z→Q", sl(2, &z()).unwrap(), q()),
        ("sl2 Z→GF2", sl(2, &z()).unwrap(), gf(2)),
        ("M2 Z→Q", mat(2, &z()).unwrap(), q()),
        ("sl2 Q→Q[t±]", sl(2, &q()).unwrap(), laurent()),
    ];
    let mut checks = Vec::new();
    for (name, b, target) in &cases {
        let alpha = RingMap::canonical(b.domain(), target).unwrap();
        checks.push((*name, verify_ibf_base_change(b, &alpha).unwrap().isomorphism));
    }
    report(9, &checks);
}

#[test]
fn criterion_10_multiloop() {
    let k = q();
    let s2 = sl(2, &k).unwrap();
    let s3 = sl(3, &k).unwrap();
    let specs = [
        ("L(sl2, id)", MultiloopSpec::single(&s2, Matrix::identity(&k, 3), 1, k.one()).unwrap()),
        (
            "L(sl3, −Xᵀ)",
            MultiloopSpec::single(&s3, negative_transpose_map(&s3).unwrap(), 2, k.from_i64(-1)).unwrap(),
        ),
    ];
    let mut checks: Vec<(String, bool)> = Vec::new();
    for (name, spec) in &specs {
        let l = multiloop(spec).unwrap();
        let m = spec.orders()[0] as i64;
        let g = spec.algebra();
        let kappa_g = killing_oracle(g);
        let basis = l.eigenbasis();
        let lk = killing_over_laurent(&l).unwrap();
        let r = laurent();
        // κ(x_r ⊗ t^{i_r/m}, x_s ⊗ t^{i_s/m}) = κ_𝔤(x_r, x_s) t^{(i_r+i_s)/m}.
        let mut monomials = true;
        for a in 0..l.rank() {
            for b in 0..l.rank() {
                let xa = basis.col(a);
                let xb = basis.col(b);
                let c = dot_form(&k, &kappa_g, &xa, &xb);
                let total = l.degree(a)[0] + l.degree(b)[0];
                let expected = if total % m == 0 { r.monomial(total / m, c).unwrap() } else { r.zero() };
                monomials &= lk.form.gram()[(a, b)] == expected;
            }
        }
        let beta = graded_form(&l).unwrap();
        let w = beta.window(-3, 3).unwrap();
        let u = graded_uniqueness_certificate(&l).unwrap();
        checks.push((format!("{name} Killing monomials"), monomials && lk.graded));
        checks.push((format!("{name} δ-formula"), w.formula_holds));
        checks.push((format!("{name} pairings nonsingular"), w.pairings_nonsingular));
        checks.push((format!("{name} IBF free rank 1"), u.ibf == free(1) && u.passes()));
    }
    let named: Vec<(&str, bool)> = checks.iter().map(|(s, b)| (s.as_str(), *b)).collect();
    report(10, &named);
}

fn dot_form(d: &Domain, g: &Matrix, x: &[Scalar], y: &[Scalar]) -> Scalar {
    let mut acc = d.zero();
    for i in 0..x.len() {
        for j in 0..y.len() {
            acc = d.add(&acc, &d.mul(&x[i], &d.mul(&g[(i, j)], &y[j])));
        }
    }
    acc
}

fn random_integer(rng: &mut ChaCha8Rng, d: &Domain) -> Scalar {
    if rng.gen_bool(0.3) {
        d.zero()
    } else {
        d.from_i64(rng.gen_range(-9..=9))
    }
}

fn random_laurent(rng: &mut ChaCha8Rng, r: &Domain) -> Scalar {
    let mut s = r.zero();
    for _ in 0..rng.gen_range(0..=2) {
        let c = q().from_i64(rng.gen_range(-3..=3));
        s = r.add(&s, &r.monomial(rng.gen_range(-1..=1), c).unwrap());
    }
    s
}

fn random_matrix(rng: &mut ChaCha8Rng, d: &Domain, laurent: bool) -> Matrix {
    let (rows, cols) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
    let mut m = Matrix::zeros(d, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = if laurent { random_laurent(rng, d) } else { random_integer(rng, d) };
        }
    }
    m
}

fn smith_ok(m: &Matrix) -> bool {
    let d = m.domain();
    let s = smith_normal_form(m).unwrap();
    let round_trip = s.u.mul(m).unwrap().mul(&s.v).unwrap() == s.d;
    let diagonal = (0..s.d.rows()).all(|i| (0..s.d.cols()).all(|j| i == j || d.is_zero(&s.d[(i, j)])));
    let diag = s.diagonal();
    let nonzero = diag.iter().all(|x| !d.is_zero(x))
        && (s.rank..s.d.rows().min(s.d.cols())).all(|i| d.is_zero(&s.d[(i, i)]));
    let divisibility = diag.windows(2).all(|w| d.divides(&w[0], &w[1]));
    let unimodular = d.is_unit(&s.u.det().unwrap()) && d.is_unit(&s.v.det().unwrap());
    round_trip && diagonal && nonzero && divisibility && unimodular
}

fn builtins(d: &Domain) -> Vec<Algebra> {
    vec![
        sl(2, d).unwrap(),
        sl(3, d).unwrap(),
        mat(2, d).unwrap(),
        mat(3, d).unwrap(),
        zorn(d).unwrap(),
        zero_algebra(3, d).unwrap(),
    ]
}

fn random_square(rng: &mut ChaCha8Rng, d: &Domain, n: usize) -> Matrix {
    let mut m = Matrix::zeros(d, n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = d.from_i64(rng.gen_range(-3..=3));
        }
    }
    m
}

#[test]
fn criterion_11_property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1bf);
    let zz = z();
    let r = laurent();
    let snf_int = (0..200).all(|_| smith_ok(&random_matrix(&mut rng, &zz, false)));
    let snf_laurent = (0..200).all(|_| smith_ok(&random_matrix(&mut rng, &r, true)));

    let mut symmetric = true;
    for d in [q(), gf(2), gf(5), zz.clone()] {
        for b in builtins(&d) {
            if is_perfect(&b).unwrap() {
                symmetric &= invariant_gram_space(&b).unwrap().iter().all(Matrix::is_symmetric);
            }
        }
    }

    let mut pullback = true;
    for b in builtins(&q()).into_iter().take(4) {
        let n = b.rank();
        for _ in 0..5 {
            let beta = BilinearForm::new(&b, random_square(&mut rng, &q(), n)).unwrap();
            let f = random_square(&mut rng, &q(), n);
            let g = random_square(&mut rng, &q(), n);
            // x ↦ F x then G: the composite g∘f has matrix G·F.
            let lhs = pullback_form(&beta, &g.mul(&f).unwrap()).unwrap();
            let rhs = pullback_form(&pullback_form(&beta, &g).unwrap(), &f).unwrap();
            pullback &= lhs.gram() == rhs.gram();
        }
    }

    let mut transitive = true;
    for b in builtins(&zz) {
        let beta = BilinearForm::new(&b, random_square(&mut rng, &zz, b.rank())).unwrap();
        for (mid, last) in [(q(), laurent()), (gf(5), gf(5)), (q(), q())] {
            let a1 = RingMap::canonical(&zz, &mid).unwrap();
            let a2 = RingMap::canonical(&mid, &last).unwrap();
            let stepwise = base_change_form(&base_change_form(&beta, &a1).unwrap(), &a2).unwrap();
            let direct = base_change_form(&beta, &a1.then(&a2).unwrap()).unwrap();
            transitive &= stepwise.gram() == direct.gram() && stepwise.algebra() == direct.algebra();
        }
    }

    let mut counts = true;
    for d in [q(), gf(2), gf(5)] {
        for b in builtins(&d) {
            let n = b.rank();
            let solved = invariant_gram_space(&b).unwrap();
            let ibf = ibf_module(&b);
            let classified = ibf.invariants().unwrap().free_rank;
            let solved_span = Span::new(&d, n * n, solved.iter().map(|g| g.entries().to_vec()).collect()).unwrap();
            let derived = Span::new(
                &d,
                n * n,
                ibf.invariant_forms().unwrap().iter().map(|g| g.entries().to_vec()).collect(),
            )
            .unwrap();
            counts &= solved.len() == classified && solved_span.equals(&derived).unwrap();
        }
    }

    report(
        11,
        &[
            ("SNF integer", snf_int),
            ("SNF Laurent", snf_laurent),
            ("invariance ⇒ symmetry", symmetric),
            ("pullback transitivity", pullback),
            ("base change transitivity", transitive),
            ("Gram solve = classification count", counts),
        ],
    );
}
