//! Bundled example inputs: the rank-2 rotation action on the six-sphere as
//! a labelled moment graph and as a twelve-node algebra diagram, the
//! two-generator circle-algebra family, and two small graphs exercising the
//! freeness probe. Every fixture is constructed from explicit data, so the
//! written files are identical across runs.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde_json::Value;

use crate::cdga::{CdgaGen, CdgaMorphism, CdgaPresentation, Factor, FactorElem, FactorMap};
use crate::circle::mk_ac;
use crate::error::{invalid, TfResult};
use crate::lattice::{PairPoset, PosetPair, Subgroup};
use crate::scalar::Q;
use crate::system::{DiagramSystem, RClass};
use crate::tgraph::{TEdge, TGraph};

/// Names accepted by the fixture writer.
pub const FIXTURE_NAMES: &[&str] =
    &["s6-graph", "s6-system", "ac-family", "theta3-triangle", "double-edge"];

fn zv(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Integer-coefficient factor element from explicit exponent vectors.
fn fe(terms: &[(&[u32], i64)]) -> FactorElem {
    let mut out = FactorElem::new();
    for (e, c) in terms {
        if *c != 0 {
            out.insert(e.to_vec(), q(*c));
        }
    }
    out
}

/// A single generator as a factor element.
fn ge(width: usize, pos: usize) -> FactorElem {
    let mut e = vec![0u32; width];
    e[pos] = 1;
    fe(&[(&e, 1)])
}

fn gens(list: &[(&str, u32)]) -> Vec<CdgaGen> {
    list.iter()
        .map(|(name, degree)| CdgaGen { name: (*name).to_string(), degree: *degree })
        .collect()
}

// ---------------------------------------------------------------------------
// moment graphs
// ---------------------------------------------------------------------------

/// The six-sphere fixed-point graph for the rank-2 rotation action: two
/// fixed points joined by three edges, one per invariant two-sphere, with
/// the three rotation weights as labels.
pub fn s6_graph() -> TGraph {
    TGraph::new(
        2,
        vec!["p".to_string(), "q".to_string()],
        vec![
            TEdge { u: 0, v: 1, label: zv(&[1, 0]) },
            TEdge { u: 0, v: 1, label: zv(&[0, 1]) },
            TEdge { u: 0, v: 1, label: zv(&[1, -1]) },
        ],
    )
    .expect("well-formed graph")
}

/// Triangle over the three coordinate labels in rank 3; its cohomology is
/// not free (one degree-0 generator plus three in degree 4 exceed the
/// generic rank).
pub fn theta3_triangle() -> TGraph {
    TGraph::new(
        3,
        vec!["p".to_string(), "q".to_string(), "r".to_string()],
        vec![
            TEdge { u: 0, v: 1, label: zv(&[1, 0, 0]) },
            TEdge { u: 1, v: 2, label: zv(&[0, 1, 0]) },
            TEdge { u: 2, v: 0, label: zv(&[0, 0, 1]) },
        ],
    )
    .expect("well-formed graph")
}

/// Two vertices joined by two independently labelled edges in rank 2.
pub fn double_edge() -> TGraph {
    TGraph::new(
        2,
        vec!["p".to_string(), "q".to_string()],
        vec![
            TEdge { u: 0, v: 1, label: zv(&[1, 0]) },
            TEdge { u: 0, v: 1, label: zv(&[0, 1]) },
        ],
    )
    .expect("well-formed graph")
}

// ---------------------------------------------------------------------------
// the six-sphere diagram
// ---------------------------------------------------------------------------

/// The three circle subgroups whose fixed sets are the invariant
/// two-spheres: annihilators ⟨(0,1)⟩, ⟨(1,−1)⟩ and ⟨(1,0)⟩.
fn s6_circles() -> [Subgroup; 3] {
    [
        Subgroup::from_rows_i64(&[&[0, 1]], 2),
        Subgroup::from_rows_i64(&[&[1, -1]], 2),
        Subgroup::from_rows_i64(&[&[1, 0]], 2),
    ]
}

/// The three weight characters, in the coordinates of the ambient rank-2
/// torus; the i-th one restricts to the identity on the i-th circle's
/// complement and vanishes on the i-th circle itself.
fn s6_weights() -> [Vec<BigInt>; 3] {
    [zv(&[0, 1]), zv(&[-1, 1]), zv(&[1, 0])]
}

fn s6_build(corrupt_second_inclusion: bool) -> DiagramSystem {
    let circles = s6_circles();
    let t = Subgroup::full(2);
    let one = Subgroup::trivial(2);
    let poset =
        PairPoset::generate_stable(&circles, 2).expect("three circles close up");
    let nn = poset.pairs().len();
    let idx = |u: &Subgroup, h: &Subgroup| -> usize {
        let p = PosetPair::new(u.clone(), h.clone()).expect("valid pair");
        poset.index_of(&p).expect("pair indexes a node")
    };
    let weights = s6_weights();

    // generator name tables per node shape
    let xname = |i: usize| format!("x{}", i + 1);
    let aname = |i: usize| format!("a{}", i + 1);
    let tname = |i: usize| format!("t{}", i + 1);

    let mut algebras = vec![CdgaPresentation::zero(); nn];
    let mut rstructure: Vec<Vec<RClass>> = vec![Vec::new(); nn];

    // (T, T): the two fixed points
    algebras[idx(&t, &t)] = CdgaPresentation::new(vec![
        Factor { gens: Vec::new(), diff: Vec::new() },
        Factor { gens: Vec::new(), diff: Vec::new() },
    ])
    .expect("two components");

    // weight classes: the class of the i-th weight at nodes carrying
    // generators x1,x2,x3 is x_i itself for i = 0 and 2, and -x2 for the
    // middle weight written against its circle's annihilator row (1,-1)
    for i in 0..3 {
        let hi = &circles[i];
        let xi = xname(i);
        let ai = aname(i);
        let ti = tname(i);
        // annihilator row of the i-th circle, and the matching sign so the
        // row maps to ±x_i
        let (row, sign): (Vec<BigInt>, i64) = match i {
            0 => (zv(&[0, 1]), 1),
            1 => (zv(&[1, -1]), -1),
            _ => (zv(&[1, 0]), 1),
        };

        // (H_i, H_i): the fixed two-sphere of the i-th circle as a free
        // one-factor algebra Λ(x_i, a_i, t_i), dt_i = a_i² − x_i·a_i
        let fixed = CdgaPresentation::new(vec![Factor {
            gens: gens(&[(&xi, 2), (&ai, 2), (&ti, 3)]),
            diff: vec![
                FactorElem::new(),
                FactorElem::new(),
                fe(&[(&[0, 2, 0], 1), (&[1, 1, 0], -1)]),
            ],
        }])
        .expect("fixed-sphere algebra");
        algebras[idx(hi, hi)] = fixed;
        rstructure[idx(hi, hi)] =
            vec![RClass { character: row.clone(), class: vec![fe(&[(&[1, 0, 0], sign)])] }];

        // (H_i, T): the same sphere seen from the full torus — one
        // polynomial factor per fixed point
        let sphere = CdgaPresentation::new(vec![
            Factor { gens: gens(&[(&xi, 2)]), diff: vec![FactorElem::new()] },
            Factor { gens: gens(&[(&xi, 2)]), diff: vec![FactorElem::new()] },
        ])
        .expect("sphere pair algebra");
        algebras[idx(hi, &t)] = sphere;
        rstructure[idx(hi, &t)] = vec![RClass {
            character: row,
            class: vec![fe(&[(&[1], sign)]), fe(&[(&[1], sign)])],
        }];
    }

    // ({1}, {1}): the total model Λ(x1,x2,x3,v,b,s) with dv = x1-x2-x3 and
    // ds = b² − x1·x2·x3·b
    let total = CdgaPresentation::new(vec![Factor {
        gens: gens(&[
            (&xname(0), 2),
            (&xname(1), 2),
            (&xname(2), 2),
            ("v", 1),
            ("b", 6),
            ("s", 11),
        ]),
        diff: vec![
            FactorElem::new(),
            FactorElem::new(),
            FactorElem::new(),
            fe(&[(&[1, 0, 0, 0, 0, 0], 1), (&[0, 1, 0, 0, 0, 0], -1), (&[0, 0, 1, 0, 0, 0], -1)]),
            FactorElem::new(),
            fe(&[(&[0, 0, 0, 0, 2, 0], 1), (&[1, 1, 1, 0, 1, 0], -1)]),
        ],
    }])
    .expect("total model");
    algebras[idx(&one, &one)] = total;

    // ({1}, H_i): Λ(x1,x2,x3,v,a_i,t_i)
    for i in 0..3 {
        let isotropy = CdgaPresentation::new(vec![Factor {
            gens: gens(&[
                (&xname(0), 2),
                (&xname(1), 2),
                (&xname(2), 2),
                ("v", 1),
                (&aname(i), 2),
                (&tname(i), 3),
            ]),
            diff: vec![
                FactorElem::new(),
                FactorElem::new(),
                FactorElem::new(),
                fe(&[
                    (&[1, 0, 0, 0, 0, 0], 1),
                    (&[0, 1, 0, 0, 0, 0], -1),
                    (&[0, 0, 1, 0, 0, 0], -1),
                ]),
                FactorElem::new(),
                {
                    let mut xa = [0u32; 6];
                    xa[i] = 1;
                    xa[4] = 1;
                    fe(&[(&[0, 0, 0, 0, 2, 0], 1), (&xa, -1)])
                },
            ],
        }])
        .expect("isotropy model");
        algebras[idx(&one, &circles[i])] = isotropy;
    }

    // ({1}, T): one factor Λ(x1,x2,x3,v) per fixed point
    let orbit_factor = || Factor {
        gens: gens(&[(&xname(0), 2), (&xname(1), 2), (&xname(2), 2), ("v", 1)]),
        diff: vec![
            FactorElem::new(),
            FactorElem::new(),
            FactorElem::new(),
            fe(&[(&[1, 0, 0, 0], 1), (&[0, 1, 0, 0], -1), (&[0, 0, 1, 0], -1)]),
        ],
    };
    algebras[idx(&one, &t)] =
        CdgaPresentation::new(vec![orbit_factor(), orbit_factor()]).expect("orbit model");

    // structure classes at the trivial-torus nodes: both ambient
    // characters, sent to x3 and x1
    let bottom_classes = |width: usize| -> Vec<RClass> {
        vec![
            RClass { character: weights[2].clone(), class: vec![ge(width, 2)] },
            RClass { character: weights[0].clone(), class: vec![ge(width, 0)] },
        ]
    };
    rstructure[idx(&one, &one)] = bottom_classes(6);
    for i in 0..3 {
        rstructure[idx(&one, &circles[i])] = bottom_classes(6);
    }
    rstructure[idx(&one, &t)] = vec![
        RClass { character: weights[2].clone(), class: vec![ge(4, 2), ge(4, 2)] },
        RClass { character: weights[0].clone(), class: vec![ge(4, 0), ge(4, 0)] },
    ];

    // cover maps
    let mut covers: Vec<((usize, usize), CdgaMorphism)> = Vec::new();
    for i in 0..3 {
        let hi = &circles[i];
        let (j, k) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };

        // (H_i,H_i) -> ({1},H_i): inclusion of the fixed-sphere model
        let incl = if corrupt_second_inclusion && i == 1 {
            // redirected variant: a2 and t2 collapse to zero (still a valid
            // degree-preserving map commuting with the differentials)
            CdgaMorphism {
                maps: vec![FactorMap {
                    source_factor: 0,
                    images: vec![ge(6, i), FactorElem::new(), FactorElem::new()],
                }],
            }
        } else {
            CdgaMorphism {
                maps: vec![FactorMap {
                    source_factor: 0,
                    images: vec![ge(6, i), ge(6, 4), ge(6, 5)],
                }],
            }
        };
        covers.push(((idx(hi, hi), idx(&one, hi)), incl));

        // (H_i,H_i) -> (H_i,T): evaluation at the two fixed points of the
        // sphere; a_i restricts to 0 at one pole and to x_i at the other
        covers.push((
            (idx(hi, hi), idx(hi, &t)),
            CdgaMorphism {
                maps: vec![
                    FactorMap {
                        source_factor: 0,
                        images: vec![ge(1, 0), FactorElem::new(), FactorElem::new()],
                    },
                    FactorMap {
                        source_factor: 0,
                        images: vec![ge(1, 0), ge(1, 0), FactorElem::new()],
                    },
                ],
            },
        ));

        // ({1},{1}) -> ({1},H_i): b ↦ x_j·x_k·a_i, s ↦ x_j²·x_k²·t_i
        let mut b_img = [0u32; 6];
        b_img[j] = 1;
        b_img[k] = 1;
        b_img[4] = 1;
        let mut s_img = [0u32; 6];
        s_img[j] = 2;
        s_img[k] = 2;
        s_img[5] = 1;
        covers.push((
            (idx(&one, &one), idx(&one, hi)),
            CdgaMorphism {
                maps: vec![FactorMap {
                    source_factor: 0,
                    images: vec![
                        ge(6, 0),
                        ge(6, 1),
                        ge(6, 2),
                        ge(6, 3),
                        fe(&[(&b_img, 1)]),
                        fe(&[(&s_img, 1)]),
                    ],
                }],
            },
        ));

        // ({1},H_i) -> ({1},T): a_i again evaluates to 0 and x_i
        covers.push((
            (idx(&one, hi), idx(&one, &t)),
            CdgaMorphism {
                maps: vec![
                    FactorMap {
                        source_factor: 0,
                        images: vec![
                            ge(4, 0),
                            ge(4, 1),
                            ge(4, 2),
                            ge(4, 3),
                            FactorElem::new(),
                            FactorElem::new(),
                        ],
                    },
                    FactorMap {
                        source_factor: 0,
                        images: vec![
                            ge(4, 0),
                            ge(4, 1),
                            ge(4, 2),
                            ge(4, 3),
                            ge(4, i),
                            FactorElem::new(),
                        ],
                    },
                ],
            },
        ));

        // (H_i,T) -> ({1},T): componentwise inclusion
        covers.push((
            (idx(hi, &t), idx(&one, &t)),
            CdgaMorphism {
                maps: vec![
                    FactorMap { source_factor: 0, images: vec![ge(4, i)] },
                    FactorMap { source_factor: 1, images: vec![ge(4, i)] },
                ],
            },
        ));

        // (T,T) -> (H_i,T): componentwise unit maps
        covers.push((
            (idx(&t, &t), idx(hi, &t)),
            CdgaMorphism {
                maps: vec![
                    FactorMap { source_factor: 0, images: Vec::new() },
                    FactorMap { source_factor: 1, images: Vec::new() },
                ],
            },
        ));
    }

    DiagramSystem::new(poset, algebras, covers, rstructure, Vec::new())
        .expect("six-sphere diagram assembles")
}

/// The twelve-node algebra diagram of the rank-2 rotation action on the
/// six-sphere: one node per admissible pair of subgroups, inclusion-style
/// maps between them, and the canonical degree-2 structure classes.
pub fn s6_system() -> DiagramSystem {
    s6_build(false)
}

/// The same diagram with the middle fixed-sphere inclusion redirected so
/// that `a2` and `t2` map to zero. The redirected map still commutes with
/// the differentials, but the base-change comparison for that inclusion
/// drops rank in degree 2.
pub fn s6_system_tc_corrupt() -> DiagramSystem {
    s6_build(true)
}

/// A minimal rank-1 diagram whose top node carries the zero algebra: every
/// class below dies in the target, no product of structure forms ever
/// annihilates them, and the localization search must report them as
/// unresolved rather than claiming a verdict.
pub fn lc_misroute_system() -> DiagramSystem {
    let t = Subgroup::full(1);
    let one = Subgroup::trivial(1);
    let poset = PairPoset::generate_stable(&[], 1).expect("rank-1 closure");
    let nn = poset.pairs().len();
    let idx = |u: &Subgroup, h: &Subgroup| -> usize {
        let p = PosetPair::new(u.clone(), h.clone()).expect("valid pair");
        poset.index_of(&p).expect("pair indexes a node")
    };
    let mut algebras = vec![CdgaPresentation::zero(); nn];
    algebras[idx(&t, &t)] = CdgaPresentation::rationals();
    algebras[idx(&one, &one)] = CdgaPresentation::new(vec![Factor {
        gens: gens(&[("x", 2)]),
        diff: vec![FactorElem::new()],
    }])
    .expect("one polynomial generator");
    // idx(&one, &t) keeps the zero algebra
    let mut rstructure = vec![Vec::new(); nn];
    rstructure[idx(&one, &one)] =
        vec![RClass { character: zv(&[1]), class: vec![ge(1, 0)] }];
    rstructure[idx(&one, &t)] = vec![RClass { character: zv(&[1]), class: Vec::new() }];
    let covers = vec![
        ((idx(&t, &t), idx(&one, &t)), CdgaMorphism { maps: Vec::new() }),
        ((idx(&one, &one), idx(&one, &t)), CdgaMorphism { maps: Vec::new() }),
    ];
    DiagramSystem::new(poset, algebras, covers, rstructure, Vec::new())
        .expect("misroute diagram assembles")
}

// ---------------------------------------------------------------------------
// circle-algebra family
// ---------------------------------------------------------------------------

/// File slugs and parameter values written by the `ac-family` fixture.
pub fn ac_family() -> Vec<(&'static str, Q)> {
    vec![
        ("ac-0", q(0)),
        ("ac-1", q(1)),
        ("ac-2", q(2)),
        ("ac-4", q(4)),
        ("ac-neg1", q(-1)),
        ("ac-9-4", Q::new(9.into(), 4.into())),
    ]
}

// ---------------------------------------------------------------------------
// file output
// ---------------------------------------------------------------------------

fn fixture_payload(name: &str) -> TfResult<Vec<(String, Value)>> {
    match name {
        "s6-graph" => Ok(vec![("s6-graph.json".to_string(), s6_graph().to_json())]),
        "s6-system" => Ok(vec![("s6-system.json".to_string(), s6_system().to_json())]),
        "theta3-triangle" => {
            Ok(vec![("theta3-triangle.json".to_string(), theta3_triangle().to_json())])
        }
        "double-edge" => Ok(vec![("double-edge.json".to_string(), double_edge().to_json())]),
        "ac-family" => Ok(ac_family()
            .into_iter()
            .map(|(slug, c)| (format!("{slug}.json"), mk_ac(&c).to_json()))
            .collect()),
        other => Err(invalid(format!(
            "unknown fixture name '{other}'; available: {}",
            FIXTURE_NAMES.join(", ")
        ))),
    }
}

/// Write the files of one named fixture into `out_dir`, returning the paths
/// written. Output is pretty-printed JSON with a trailing newline and is
/// byte-identical across runs.
pub fn write_fixture_files(name: &str, out_dir: &Path) -> TfResult<Vec<PathBuf>> {
    let payload = fixture_payload(name)?;
    fs::create_dir_all(out_dir)
        .map_err(|e| invalid(format!("cannot create {}: {e}", out_dir.display())))?;
    let mut written = Vec::new();
    for (fname, value) in payload {
        let path = out_dir.join(&fname);
        let body = format!("{:#}\n", value);
        fs::write(&path, body)
            .map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}
