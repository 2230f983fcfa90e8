use gradcalc::{execute, parse, RunOptions};
use gradcalc_core::random::Gen;
use gradcalc_core::{rat, BlockSymmetry, Chart, Symmetry, TensorField};
use proptest::prelude::*;

fn chart_decl(name: &str, c: &Chart) -> String {
    let vars: Vec<String> = c
        .vars()
        .map(|v| {
            let w: Vec<String> = c.weights(v).iter().map(i64::to_string).collect();
            format!("{}:{}", c.name(v), w.join(","))
        })
        .collect();
    format!("chart {name} {{ {} }}", vars.join(", "))
}

fn tag(b: BlockSymmetry) -> &'static str {
    match b {
        BlockSymmetry::None => "none",
        BlockSymmetry::Sym => "sym",
        BlockSymmetry::Antisym => "antisym",
    }
}

fn tensor_decl(t: &TensorField) -> String {
    let (q, p, s) = (t.q(), t.p(), t.symmetry());
    let tags = match (q >= 2, p >= 2) {
        (true, true) => format!(" {} {}", tag(s.contra), tag(s.cov)),
        (true, false) => format!(" {}", tag(s.contra)),
        (false, true) => format!(" {}", tag(s.cov)),
        (false, false) => String::new(),
    };
    format!("tensor({q},{p}){tags} T on M = {}", t.to_text())
}

/// A base chart or its first prolongation, so names like `x_1` appear.
fn random_chart(g: &mut Gen) -> Chart {
    let dim = g.range(1, 3);
    let spec: Vec<(&str, i64)> = ["x", "y", "z"][..dim].iter().map(|&n| (n, g.int_range(0, 2))).collect();
    let c = Chart::simple(&spec).unwrap();
    if g.chance(0.5) {
        c.prolong(1).unwrap()
    } else {
        c
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parse_inverts_render(seed in any::<u64>()) {
        let mut g = Gen::new(seed, 0);
        let c = random_chart(&mut g);
        let (q, p) = (g.range(0, 2), g.range(0, 2));
        let mut sym = g.symmetry(q, p);
        if c.dim() < 2 {
            sym = Symmetry::NONE;
        }
        let denom = g.int_range(1, 4);
        let t = g.tensor(&c, q, p, sym, 3).scale(&rat(1, denom));
        let src = format!("{}\n{}\n", chart_decl("M", &c), tensor_decl(&t));
        let script = parse(&src).map_err(|e| TestCaseError::fail(format!("{e}\n{src}")))?;
        let run = execute(&script, &RunOptions::default());
        prop_assert!(run.error.is_none(), "{:?}\n{}", run.error, src);
        let back = &run.tensors["T"];
        prop_assert_eq!(back.to_text(), t.to_text());
        prop_assert_eq!(back.to_json(), t.to_json());
    }
}

#[test]
fn unicode_aliases_render_as_ascii() {
    let src = "chart M { x:0, y:0 }\ntensor(2,0) antisym L on M = x·∂x ∧ ∂y\ntensor(1,1) K on M = d/dx ⊗ dy − dx ox d/dy";
    let run = execute(&parse(src).unwrap(), &RunOptions::default());
    assert!(run.error.is_none(), "{:?}", run.error);
    assert_eq!(run.tensors["L"].to_text(), "x*d/dx ^^ d/dy");
    assert!(!run.tensors["K"].to_text().contains('⊗'));
}
