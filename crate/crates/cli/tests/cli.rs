use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use semigroupoid::graph::standard::{circulant, flower, single_edge};
use semigroupoid::{Algebra, Graph, Scalar, SemanticsMode};
use semigroupoid_cli::{parse_element, run, EXIT_FAIL, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE};
use tempfile::TempDir;

const LOOP: &str = r#"{"vertices":["v"],"edges":[{"id":"l","src":"v","dst":"v"}]}"#;
const FLOWER: &str = r#"{"vertices":["v"],"edges":[{"id":"e1","src":"v","dst":"v"},{"id":"e2","src":"v","dst":"v"}]}"#;

struct Files {
    _dir: TempDir,
    root: PathBuf,
}

impl Files {
    fn new() -> Files {
        let dir = TempDir::new().unwrap();
        let root = dir.path().to_path_buf();
        std::fs::write(root.join("loop.json"), LOOP).unwrap();
        std::fs::write(root.join("flower.json"), FLOWER).unwrap();
        std::fs::write(
            root.join("dup.json"),
            r#"{"vertices":["v","v"],"edges":[]}"#,
        )
        .unwrap();
        Files { _dir: dir, root }
    }

    fn path(&self, name: &str) -> String {
        self.root.join(name).display().to_string()
    }
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("semigroupoid").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn golden_outputs() {
    let f = Files::new();
    let g = f.path("loop.json");

    let (code, out, _) = cli(&[
        "cumulants",
        "--graph",
        &g,
        "--mode",
        "paper",
        "--order",
        "2",
        "L(l)+Ls(l)",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "k1 = 0\nk2 = 2*P(v)\n");

    let (code, out, _) = cli(&["nc", "count", "4"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "14\n"));

    let (code, out, _) = cli(&["distinct", "--graph", &g, "l.l", "l.l.l"]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "not diagram-distinct\n"));

    let (_, out, _) = cli(&["moments", "--graph", &g, "--order", "6", "L(l)+Ls(l)"]);
    assert_eq!(
        out,
        "m1 = 0\nm2 = 2*P(v)\nm3 = 0\nm4 = 6*P(v)\nm5 = 0\nm6 = 20*P(v)\n"
    );

    let (_, out, _) = cli(&[
        "moments",
        "--graph",
        &g,
        "--mode",
        "vacuum",
        "--order",
        "4",
        "L(l)+Ls(l)",
    ]);
    assert_eq!(out, "m1 = 0\nm2 = P(v)\nm3 = 0\nm4 = 2*P(v)\n");

    let (_, out, _) = cli(&[
        "reduce",
        "--graph",
        &g,
        "--mode",
        "vacuum",
        "L*(l)L(l) + L(l)L*(l)",
    ]);
    assert_eq!(out, "P(v) + L(l)L*(l)\n");

    let (_, out, _) = cli(&[
        "expect",
        "--graph",
        &g,
        "--mode",
        "vacuum",
        "2*L(l)L*(l) + 1/3*P(v)",
    ]);
    assert_eq!(out, "1/3*P(v)\n");

    let (_, out, _) = cli(&["nc", "mobius", "3"]);
    assert_eq!(
        out,
        "{1}{2}{3} 2\n{1}{2,3} -1\n{1,3}{2} -1\n{1,2}{3} -1\n{1,2,3} 1\n"
    );

    let (_, out, _) = cli(&["distinct", "--graph", &f.path("flower.json"), "e1", "e2.e1"]);
    assert_eq!(out, "diagram-distinct\n");
}

#[test]
fn classify_exit_codes() {
    let f = Files::new();
    let g = f.path("loop.json");
    let a = "L(l)+Ls(l)";
    let (code, out, _) = cli(&[
        "classify",
        "semicircular",
        "--graph",
        &g,
        "--mode",
        "vacuum",
        a,
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.ends_with("verdict: pass (up to order 6)\n"), "{out}");

    let (code, out, _) = cli(&["classify", "semicircular", "--graph", &g, "--order", "4", a]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.contains("k4 = -2*P(v)"), "{out}");

    let (code, _, _) = cli(&["classify", "even", "--graph", &g, a]);
    assert_eq!(code, EXIT_OK);
    let (code, out, _) = cli(&["classify", "even", "--graph", &g, "L(l)"]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.contains("not self-adjoint"), "{out}");
    let (code, _, _) = cli(&["classify", "even", "--graph", &g, "L(l)+Ls(l)+P(v)"]);
    assert_eq!(code, EXIT_FAIL);
    let (code, _, _) = cli(&[
        "classify",
        "rdiagonal",
        "--graph",
        &g,
        "--mode",
        "vacuum",
        "--order",
        "4",
        "L(l)",
    ]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn free_check() {
    let f = Files::new();
    let g = f.path("flower.json");
    let args = [
        "free-check",
        "--graph",
        &g,
        "--mode",
        "vacuum",
        "--order",
        "4",
        "--max-word-len",
        "1",
    ];
    let (code, out, _) = cli(&[&args[..], &["--left", "L(e1)", "--right", "L(e2)"]].concat());
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("verdict: pass"));

    let (code, out, _) = cli(&[&args[..], &["--left", "L(e1)", "--right", "L(e1)"]].concat());
    assert_eq!(code, EXIT_FAIL, "{out}");

    let (code, out, _) = cli(&[&args[..], &["--left", "L(e1)"]].concat());
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("verdict: indeterminate"), "{out}");
}

#[test]
fn usage_and_parse_errors() {
    let f = Files::new();
    let g = f.path("loop.json");
    let cases: &[&[&str]] = &[
        &["bogus"],
        &["reduce"],
        &["reduce", "L(l)"],
        &["reduce", "--graph", &g, "L(l.q)"],
        &["reduce", "--graph", &g, "1/0*L(l)"],
        &["reduce", "--graph", &g, "--mode", "neither", "L(l)"],
        &["reduce", "--graph", &f.path("missing.json"), "L(l)"],
        &["reduce", "--graph", &f.path("dup.json"), "P(v)"],
        &["distinct", "--graph", &g, "l", "m"],
    ];
    for args in cases {
        let (code, out, err) = cli(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}: {out}{err}");
        assert!(!err.is_empty(), "{args:?}");
    }
    let (_, _, err) = cli(&["reduce", "--graph", &g, "L(l.e9)"]);
    assert!(err.contains("unknown edge e9"), "{err}");
    let (_, _, err) = cli(&["reduce", "--graph", &f.path("dup.json"), "P(v)"]);
    assert!(err.contains('v'), "{err}");
}

#[test]
fn resource_caps() {
    let f = Files::new();
    let g = f.path("loop.json");
    assert_eq!(cli(&["nc", "count", "15"]).0, EXIT_RESOURCE);
    assert_eq!(cli(&["nc", "mobius", "11"]).0, EXIT_RESOURCE);
    assert_eq!(
        cli(&["cumulants", "--graph", &g, "--order", "11", "L(l)"]).0,
        EXIT_RESOURCE
    );
}

#[test]
fn json_report_schema() {
    let f = Files::new();
    let g = f.path("loop.json");
    let (code, out, _) = cli(&[
        "classify",
        "semicircular",
        "--graph",
        &g,
        "--order",
        "4",
        "--json",
        "L(l)+Ls(l)",
    ]);
    assert_eq!(code, EXIT_FAIL);
    let j: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["subject"], "L*(l) + L(l)");
    assert_eq!(j["mode"], "paper");
    assert_eq!(j["n_max"], 4);
    assert_eq!(j["verdict"], "fail");
    let ks = j["cumulants"].as_array().unwrap();
    assert_eq!(ks.len(), 4);
    assert_eq!(ks[1]["n"], 2);
    assert_eq!(ks[1]["value"], "2*P(v)");
    assert!(j["witness"].is_object());

    let (_, out, _) = cli(&["classify", "even", "--graph", &g, "--json", "L(l)+Ls(l)"]);
    let j: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["verdict"], "pass");
    assert_eq!(j["moments"].as_array().unwrap().len(), 6);

    let (_, out, _) = cli(&["nc", "count", "5", "--json"]);
    assert_eq!(
        serde_json::from_str::<serde_json::Value>(&out).unwrap()["count"],
        42
    );
}

#[test]
fn deterministic_output() {
    let f = Files::new();
    let g = f.path("flower.json");
    let commands: &[&[&str]] = &[
        &[
            "cumulants",
            "--graph",
            &g,
            "--order",
            "4",
            "L(e1)+Ls(e1)+1/2*L(e2)L*(e1)",
        ],
        &[
            "classify",
            "rdiagonal",
            "--graph",
            &g,
            "--json",
            "--order",
            "4",
            "L(e1)+L(e2)",
        ],
        &[
            "inversion-check",
            "--graph",
            &g,
            "--mode",
            "vacuum",
            "--order",
            "4",
            "--seed",
            "7",
            "--count",
            "5",
        ],
        &["genop", "--graph", &g, "--json"],
        &["nc", "mobius", "5"],
    ];
    for args in commands {
        let first = cli(args);
        assert_eq!(first, cli(args), "{args:?}");
        assert_eq!(first.0, EXIT_OK, "{args:?}: {}", first.2);
    }
}

#[test]
fn hidden_diagnostics() {
    let f = Files::new();
    let g = f.path("loop.json");
    let (code, out, _) = cli(&["lattice", "--graph", &g, "L*(l)L(l)"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("star-axis property: true"), "{out}");
    let (code, out, _) = cli(&["fock", "--graph", &g, "--depth", "4", "L*(l)L*(l)L(l)L(l)"]);
    assert_eq!(code, EXIT_OK);
    assert!(
        out.contains("expectation: P(v)") && out.contains("valid: true"),
        "{out}"
    );
    let (code, out, _) = cli(&[
        "inversion-check",
        "--graph",
        &g,
        "--seed",
        "1",
        "--count",
        "5",
    ]);
    assert_eq!((code, out.as_str()), (EXIT_OK, "ok: 5 tuples, seed 1\n"));
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn graphs() -> Vec<Graph> {
    vec![single_edge(), flower(), circulant(3)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn render_round_trip(
        which in 0usize..3,
        vacuum in any::<bool>(),
        terms in prop::collection::vec((0usize..64, 0usize..64, -4i64..5, 1i64..4, -2i64..3), 0..5),
    ) {
        let graph = graphs().swap_remove(which);
        // paper relations are only consistent on out-degree at most one
        let mode = if vacuum || graph.vertex_count() == 1 { SemanticsMode::FockVacuum } else { SemanticsMode::PaperRelations };
        let alg = Algebra::new(graph, mode);
        let g = alg.graph();
        let paths: Vec<_> = g.vertex_ids().map(|v| g.trivial(v)).chain(g.finite_paths(2)).collect();
        let mut x = alg.zero();
        for (i, j, re, d, im) in terms {
            let (a, b) = (&paths[i % paths.len()], &paths[j % paths.len()]);
            if a.range() != b.range() {
                continue;
            }
            if let Some(m) = alg.iso(a.clone(), b.clone()).unwrap().into_option() {
                let c = Scalar::complex(rational(re, d), rational(im, d));
                x = x.add(&alg.monomial(m).scale(&c)).unwrap();
            }
        }
        let text = x.to_string();
        prop_assert_eq!(parse_element(&alg, &text).unwrap(), x, "{}", text);
    }
}
