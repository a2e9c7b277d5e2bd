//! A curated corpus of derivations in the restricted fragment, covering all
//! five intuitionistic rules, nested quantifiers, quantification over `o`,
//! instantiation with formulas, and modus ponens on a minor premise with
//! variables that occur neither in the hypotheses nor in the conclusion.

use crate::deriv::Pred2Derivation;
use crate::expr::Expr;
use crate::parse::{parse_expr, parse_formula};
use crate::types::{Mode, Signature, SimpleType};

/// Signature of the corpus: base type `b`; `P, Q : b -> o`,
/// `R : b -> b -> o`, `c, d : b`, `f : b -> b`; variables `x, y, z, w : b`
/// and `p, q, r, s : o`.
pub fn corpus_signature() -> Signature {
    let b = SimpleType::base("b");
    let bo = SimpleType::arrow(b.clone(), SimpleType::O);
    Signature::default()
        .with_base("b")
        .with_const("P", bo.clone())
        .with_const("Q", bo.clone())
        .with_const("R", SimpleType::arrow(b.clone(), bo))
        .with_const("c", b.clone())
        .with_const("d", b.clone())
        .with_const("f", SimpleType::arrow(b.clone(), b.clone()))
        .with_var("x", b.clone())
        .with_var("y", b.clone())
        .with_var("z", b.clone())
        .with_var("w", b)
        .with_var("p", SimpleType::O)
        .with_var("q", SimpleType::O)
        .with_var("r", SimpleType::O)
        .with_var("s", SimpleType::O)
}

struct B {
    sig: Signature,
}

impl B {
    fn f(&self, s: &str) -> Expr {
        parse_formula(s, &self.sig, Mode::Pred2_0).unwrap_or_else(|e| panic!("corpus formula '{s}': {e}"))
    }
    fn t(&self, s: &str) -> Expr {
        parse_expr(s, &self.sig, Mode::Pred2_0).unwrap_or_else(|e| panic!("corpus term '{s}': {e}"))
    }
    fn ax(&self, hyps: &[&str], concl: &str) -> Pred2Derivation {
        Pred2Derivation::axiom(hyps.iter().map(|h| self.f(h)).collect(), self.f(concl))
    }
    fn ii(&self, phi: &str, d: Pred2Derivation) -> Pred2Derivation {
        Pred2Derivation::imp_i(self.f(phi), d)
    }
    fn ie(&self, major: Pred2Derivation, minor: Pred2Derivation) -> Pred2Derivation {
        Pred2Derivation::imp_e(major, minor).expect("corpus: major premise is an implication")
    }
    fn ai(&self, x: &str, ty: SimpleType, d: Pred2Derivation) -> Pred2Derivation {
        Pred2Derivation::forall_i(x, ty, d)
    }
    fn ae(&self, d: Pred2Derivation, t: &str) -> Pred2Derivation {
        Pred2Derivation::forall_e(d, self.t(t)).expect("corpus: premise is universal")
    }
}

/// The corpus as `(name, derivation)` pairs; every entry checks
/// intuitionistically over [`corpus_signature`].
pub fn corpus() -> Vec<(&'static str, Pred2Derivation)> {
    let k = B { sig: corpus_signature() };
    let b = || SimpleType::base("b");
    let o = || SimpleType::O;
    let mut out: Vec<(&'static str, Pred2Derivation)> = Vec::new();

    out.push(("axiom", k.ax(&["p"], "p")));
    out.push(("axiom_among_many", k.ax(&["q", "P c", "p"], "P c")));
    out.push(("identity", k.ii("p", k.ax(&["p"], "p"))));
    out.push(("weak_k", k.ii("p", k.ii("q", k.ax(&["p", "q"], "p")))));
    {
        let g = ["p -> q -> r", "p -> q", "p"];
        let pqr = k.ie(k.ax(&g, "p -> q -> r"), k.ax(&g, "p"));
        let pq = k.ie(k.ax(&g, "p -> q"), k.ax(&g, "p"));
        let d = k.ie(pqr, pq);
        out.push(("combinator_s", k.ii("p -> q -> r", k.ii("p -> q", k.ii("p", d)))));
    }
    {
        let g = ["p -> q", "q -> r", "p"];
        let q = k.ie(k.ax(&g, "p -> q"), k.ax(&g, "p"));
        let r = k.ie(k.ax(&g, "q -> r"), q);
        out.push(("transitivity", k.ii("p -> q", k.ii("q -> r", k.ii("p", r)))));
    }
    {
        let g = ["p -> p -> q", "p"];
        let d = k.ie(k.ie(k.ax(&g, "p -> p -> q"), k.ax(&g, "p")), k.ax(&g, "p"));
        out.push(("contraction", k.ii("p -> p -> q", k.ii("p", d))));
    }
    {
        let g = ["forall x:b. P x"];
        out.push(("inst_const", k.ii(g[0], k.ae(k.ax(&g, g[0]), "c"))));
        out.push(("inst_fun", k.ii(g[0], k.ae(k.ax(&g, g[0]), "f c"))));
        out.push(("rename_bound", k.ii(g[0], k.ai("y", b(), k.ae(k.ax(&g, g[0]), "y")))));
        out.push(("inst_var_free", k.ae(k.ax(&g, g[0]), "z")));
    }
    out.push(("forall_identity", k.ai("x", b(), k.ii("P x", k.ax(&["P x"], "P x")))));
    {
        let h = "forall x:b. forall y:b. R x y";
        let g = [h];
        let inner = k.ae(k.ae(k.ax(&g, h), "z"), "w");
        let swapped = k.ai("z", b(), k.ai("w", b(), inner));
        // conclusion ∀z.∀w.R z w is α-equal to the goal ∀y.∀x.R x y only up to
        // renaming; build the swap explicitly
        let swap_body = k.ae(k.ae(k.ax(&g, h), "x"), "y");
        let swap = k.ai("y", b(), k.ai("x", b(), swap_body));
        out.push(("nested_regen", k.ii(h, swapped)));
        out.push(("nested_swap", k.ii(h, swap)));
        out.push(("nested_inst", k.ii(h, k.ae(k.ae(k.ax(&g, h), "c"), "d"))));
        out.push(("nested_diag", k.ii(h, k.ai("x", b(), k.ae(k.ae(k.ax(&g, h), "x"), "x")))));
    }
    {
        let g = ["bot"];
        out.push(("ex_falso_prop", k.ii("bot", k.ae(k.ax(&g, "bot"), "p"))));
        out.push(("ex_falso_atom", k.ii("bot", k.ae(k.ax(&g, "bot"), "P c"))));
        out.push(("ex_falso_forall", k.ii("bot", k.ai("x", b(), k.ae(k.ax(&g, "bot"), "P x")))));
        out.push(("ex_falso_formula", k.ii("bot", k.ae(k.ax(&g, "bot"), "q -> r"))));
    }
    out.push(("forall_prop_identity", k.ai("p", o(), k.ii("p", k.ax(&["p"], "p")))));
    out.push((
        "forall_prop_k",
        k.ai("p", o(), k.ai("q", o(), k.ii("p", k.ii("q", k.ax(&["p", "q"], "p"))))),
    ));
    {
        let h1 = "forall x:b. P x -> Q x";
        let h2 = "forall x:b. P x";
        let g = [h1, h2];
        let qy = k.ie(k.ae(k.ax(&g, h1), "y"), k.ae(k.ax(&g, h2), "y"));
        out.push(("forall_distrib", k.ii(h1, k.ii(h2, k.ai("y", b(), qy)))));
        let g2 = [h1, "P c"];
        let qc = k.ie(k.ae(k.ax(&g2, h1), "c"), k.ax(&g2, "P c"));
        out.push(("forall_mp_const", k.ii(h1, k.ii("P c", qc))));
        out.push(("hyps_nonempty", k.ie(k.ae(k.ax(&g2, h1), "c"), k.ax(&g2, "P c"))));
    }
    out.push(("vacuous_forall", k.ii("p", k.ai("x", b(), k.ax(&["p"], "p")))));
    {
        let g = ["forall x:b. p"];
        out.push(("vacuous_elim", k.ii(g[0], k.ae(k.ax(&g, g[0]), "c"))));
    }
    {
        // modus ponens whose minor premise mentions a variable absent from
        // the hypotheses and the conclusion
        let h1 = "forall x:b. P x";
        let h2 = "forall x:b. P x -> p";
        let g = [h1, h2];
        let d = k.ie(k.ae(k.ax(&g, h2), "z"), k.ae(k.ax(&g, h1), "z"));
        out.push(("mp_repair_base", k.ii(h1, k.ii(h2, d))));
        let d2 = k.ie(k.ae(k.ax(&g, h2), "f z"), k.ae(k.ax(&g, h1), "f z"));
        out.push(("mp_repair_fun_arg", k.ii(h1, k.ii(h2, d2))));
    }
    {
        let h1 = "forall x:b. forall y:b. R x y -> q";
        let h2 = "forall x:b. forall y:b. R x y";
        let g = [h1, h2];
        let d = k.ie(k.ae(k.ae(k.ax(&g, h1), "z"), "w"), k.ae(k.ae(k.ax(&g, h2), "z"), "w"));
        out.push(("mp_repair_two_vars", k.ii(h1, k.ii(h2, d))));
    }
    {
        let h = "forall q:o. (q -> q) -> p";
        let g = [h];
        let rr = k.ii("r", k.ax(&[h, "r"], "r"));
        let d = k.ie(k.ae(k.ax(&g, h), "r"), rr);
        out.push(("mp_repair_prop_var", k.ii(h, d)));
        let qq = k.ii("p", k.ax(&[h, "p"], "p"));
        let d2 = k.ie(k.ae(k.ax(&g, h), "p"), qq);
        out.push(("mp_no_repair", k.ii(h, d2)));
    }
    {
        let g = ["p", "p -> bot"];
        let d = k.ie(k.ax(&g, "p -> bot"), k.ax(&g, "p"));
        out.push(("double_negation_intro", k.ii("p", k.ii("p -> bot", d))));
    }
    {
        let g = ["p -> q", "q -> bot", "p"];
        let d = k.ie(k.ax(&g, "q -> bot"), k.ie(k.ax(&g, "p -> q"), k.ax(&g, "p")));
        out.push(("contraposition", k.ii("p -> q", k.ii("q -> bot", k.ii("p", d)))));
    }
    {
        let g = ["((p -> bot) -> bot) -> bot", "p"];
        let inner_g = ["((p -> bot) -> bot) -> bot", "p", "p -> bot"];
        let nnp = k.ii("p -> bot", k.ie(k.ax(&inner_g, "p -> bot"), k.ax(&inner_g, "p")));
        let d = k.ie(k.ax(&g, "((p -> bot) -> bot) -> bot"), nnp);
        out.push(("triple_negation", k.ii("((p -> bot) -> bot) -> bot", k.ii("p", d))));
    }
    {
        let h = "forall x:b. P x -> bot";
        let g = ["P c", h];
        let d = k.ie(k.ae(k.ax(&g, h), "c"), k.ax(&g, "P c"));
        out.push(("witness_refutes", k.ii("P c", k.ii(h, d))));
    }
    {
        let h = "forall x:b. P x -> P (f x)";
        let g = [h, "P c"];
        let pfc = k.ie(k.ae(k.ax(&g, h), "c"), k.ax(&g, "P c"));
        let pffc = k.ie(k.ae(k.ax(&g, h), "f c"), pfc);
        out.push(("iterate_fun", k.ii(h, k.ii("P c", pffc))));
    }
    {
        let h = "forall x:b. forall y:b. R x y";
        let g = [h];
        out.push(("forall_inner_const", k.ii(h, k.ai("x", b(), k.ae(k.ae(k.ax(&g, h), "x"), "c")))));
    }
    {
        let h = "forall x:b. (forall y:b. R x y) -> R x x";
        let g = ["forall y:b. R z y"];
        let d = k.ii(g[0], k.ae(k.ax(&g, g[0]), "z"));
        let _ = h;
        out.push(("forall_self_inst", k.ai("z", b(), d)));
    }
    {
        let h = "forall p:o. p";
        let g = [h];
        out.push(("bot_to_forall_pred", k.ii(h, k.ai("x", b(), k.ae(k.ax(&g, h), "Q x")))));
    }
    {
        let h = "forall q:o. q -> q";
        out.push(("inst_with_formula", k.ii(h, k.ae(k.ax(&[h], h), "forall x:b. P x"))));
    }
    out
}
