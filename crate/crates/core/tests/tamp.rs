//! PDDL parsing and skeleton enumeration against a golden corpus, replayed
//! by an independent STRIPS checker, plus the geometry ↔ symbol bridge.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::OnceLock;

use proptest::prelude::*;
use skillseq_core::pddl::*;
use skillseq_core::planner::{evaluate_objective, ActionPlan, PlannerConfig, PlannerMethod};
use skillseq_core::pool::Serial;
use skillseq_core::scenarios::{self, default_skill_configs, hook_reach_problem, training_scenario};
use skillseq_core::seed;
use skillseq_core::skills::{train_skill, SkillLibrary};
use skillseq_core::tamp::*;
use skillseq_core::uq::UncertaintyConfig;
use skillseq_core::world::*;

fn data(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn domain(name: &str) -> PddlDomain {
    parse_domain(&data(name)).unwrap()
}

fn manipulation() -> PddlDomain {
    parse_domain(MANIPULATION_DOMAIN).unwrap()
}

/// (domain, problems) pairs of the valid corpus.
fn corpus() -> Vec<(PddlDomain, Vec<PddlProblem>)> {
    let pairs: [(&str, &[&str]); 3] = [
        ("blocksworld.pddl", &["sussman.pddl"]),
        ("gripper.pddl", &["gripper-2.pddl", "gripper-solved.pddl"]),
        ("no-actions.pddl", &[]),
    ];
    let mut out: Vec<_> = pairs
        .iter()
        .map(|(d, ps)| {
            let d = domain(d);
            let ps = ps.iter().map(|p| parse_problem(&data(p), &d).unwrap()).collect();
            (d, ps)
        })
        .collect();
    let m = manipulation();
    let p = parse_problem(&data("hook-reach.pddl"), &m).unwrap();
    out.push((m, vec![p]));
    out
}

// ------------------------------------------------------- reference checker

type State = BTreeSet<GroundAtom>;

/// Ground a schema literal under `binding` (parameter name → object).
fn ground(l: &Literal, binding: &BTreeMap<&str, &str>) -> GroundAtom {
    GroundAtom {
        predicate: l.predicate.clone(),
        args: l
            .args
            .iter()
            .map(|t| match t {
                Term::Var(v) => binding[v.as_str()].to_string(),
                Term::Object(o) => o.clone(),
            })
            .collect(),
    }
}

fn bind<'a>(op: &'a OperatorSchema, args: &'a [String]) -> BTreeMap<&'a str, &'a str> {
    assert_eq!(op.params.len(), args.len(), "{} arity", op.name);
    op.params.iter().zip(args).map(|(p, a)| (p.name.as_str(), a.as_str())).collect()
}

/// Apply one action if it is well-typed and applicable.
fn apply(d: &PddlDomain, p: &PddlProblem, s: &State, a: &GroundAction) -> Option<State> {
    let op = d.operators.iter().find(|o| o.name == a.operator)?;
    for (param, arg) in op.params.iter().zip(&a.args) {
        let ty = p.object_type(d, arg)?;
        if !d.is_subtype(ty, &param.ty) {
            return None;
        }
    }
    let b = bind(op, &a.args);
    for l in &op.precondition {
        if s.contains(&ground(l, &b)) != l.positive {
            return None;
        }
    }
    let mut next = s.clone();
    for l in op.effects.iter().filter(|l| !l.positive) {
        next.remove(&ground(l, &b));
    }
    for l in op.effects.iter().filter(|l| l.positive) {
        next.insert(ground(l, &b));
    }
    Some(next)
}

fn satisfies(s: &State, goal: &[GroundLiteral]) -> bool {
    goal.iter().all(|g| s.contains(&g.atom) == g.positive)
}

fn init(p: &PddlProblem) -> State {
    p.init.iter().cloned().collect()
}

/// Replay a skeleton from the initial state; `None` if a step is illegal.
fn replay(d: &PddlDomain, p: &PddlProblem, skeleton: &[GroundAction]) -> Option<State> {
    let mut s = init(p);
    for a in skeleton {
        s = apply(d, p, &s, a)?;
    }
    Some(s)
}

/// Every well-typed grounding of every operator, built from the type
/// hierarchy directly.
fn all_actions(d: &PddlDomain, p: &PddlProblem) -> Vec<GroundAction> {
    let objects = p.all_objects(d);
    let mut out = Vec::new();
    for op in &d.operators {
        let mut tuples: Vec<Vec<String>> = vec![vec![]];
        for param in &op.params {
            let fits: Vec<&Typed> = objects.iter().filter(|o| d.is_subtype(&o.ty, &param.ty)).collect();
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    fits.iter().map(move |o| {
                        let mut t = t.clone();
                        t.push(o.name.clone());
                        t
                    })
                })
                .collect();
        }
        out.extend(tuples.into_iter().map(|args| GroundAction {
            operator: op.name.clone(),
            args,
        }));
    }
    out
}

/// All goal-reaching applicable sequences of exactly the shortest length
/// (depth-first over every sequence up to `max_len`).
fn exhaustive_shortest(d: &PddlDomain, p: &PddlProblem, max_len: usize) -> Option<BTreeSet<Vec<GroundAction>>> {
    let actions = all_actions(d, p);
    let s0 = init(p);
    if satisfies(&s0, &p.goal) {
        return Some(BTreeSet::from([vec![]]));
    }
    for len in 1..=max_len {
        let mut found = BTreeSet::new();
        let mut stack = vec![(s0.clone(), Vec::<GroundAction>::new())];
        while let Some((s, path)) = stack.pop() {
            for a in &actions {
                let Some(next) = apply(d, p, &s, a) else { continue };
                let mut path = path.clone();
                path.push(a.clone());
                if path.len() == len {
                    if satisfies(&next, &p.goal) {
                        found.insert(path);
                    }
                } else {
                    stack.push((next, path));
                }
            }
        }
        if !found.is_empty() {
            return Some(found);
        }
    }
    None
}

fn act(op: &str, args: &[&str]) -> GroundAction {
    GroundAction {
        operator: op.into(),
        args: args.iter().map(|s| s.to_string()).collect(),
    }
}

fn hook_skeleton() -> Vec<GroundAction> {
    vec![
        act("pick", &["hook", "table"]),
        act("pull", &["block", "hook"]),
        act("place", &["hook", "table"]),
        act("pick", &["block", "table"]),
    ]
}

// ------------------------------------------------------------------ parser

#[test]
fn corpus_round_trips() {
    let mut texts: Vec<(String, Vec<String>)> = vec![
        (data("blocksworld.pddl"), vec![data("sussman.pddl")]),
        (data("gripper.pddl"), vec![data("gripper-2.pddl"), data("gripper-solved.pddl")]),
        (data("no-actions.pddl"), vec![]),
    ];
    texts.push((MANIPULATION_DOMAIN.to_string(), vec![data("hook-reach.pddl")]));
    for (dt, pts) in texts {
        let d = parse_domain(&dt).unwrap();
        let printed = d.to_string();
        let d2 = parse_domain(&printed).unwrap_or_else(|e| panic!("{e}\n{printed}"));
        assert_eq!(d2, d);
        assert_eq!(d2.to_string(), printed, "printing is a fixed point");
        for pt in pts {
            let p = parse_problem(&pt, &d).unwrap();
            let p2 = parse_problem(&p.to_string(), &d2).unwrap();
            assert_eq!(p2, p);
        }
    }
}

#[test]
fn bundled_domain_has_the_four_skills() {
    let d = manipulation();
    let ops: Vec<&str> = d.operators.iter().map(|o| o.name.as_str()).collect();
    assert_eq!(ops, ["pick", "place", "pull", "push"]);
    let preds: BTreeSet<&str> = d.predicates.iter().map(|p| p.name.as_str()).collect();
    assert_eq!(
        preds,
        BTreeSet::from(["handempty", "holding", "on", "inworkspace", "under", "clear"])
    );
    for op in &d.operators {
        let skill = SkillId::from_name(&op.name).unwrap();
        assert_eq!(op.params.len(), skill.arity(), "{}", op.name);
        // Effects only mention the schema's own parameters or constants.
        for l in op.effects.iter().chain(&op.precondition) {
            for t in &l.args {
                match t {
                    Term::Var(v) => assert!(op.params.iter().any(|p| &p.name == v)),
                    Term::Object(o) => assert!(d.constant_type(o).is_some()),
                }
            }
            assert_eq!(d.predicate(&l.predicate).unwrap().params.len(), l.args.len());
        }
    }
}

#[test]
fn empty_operator_list_is_a_valid_domain() {
    let d = domain("no-actions.pddl");
    assert!(d.operators.is_empty());
    assert_eq!(d.predicates.len(), 2);
    let p = parse_problem(
        "(define (problem p) (:domain idle) (:objects x) (:init (dark)) (:goal (not (lit x))))",
        &d,
    )
    .unwrap();
    let all: Vec<_> = plan_skeletons(&d, &p, 5).collect();
    assert_eq!(all, vec![Vec::<GroundAction>::new()]);
    let p = parse_problem("(define (problem p) (:domain idle) (:objects x) (:init) (:goal (lit x)))", &d).unwrap();
    assert_eq!(plan_skeletons(&d, &p, 5).count(), 0);
}

#[test]
fn each_error_has_its_own_diagnostic() {
    match parse_domain(&data("bad/lexical.pddl")) {
        Err(ParseError::Lexical { line, col, .. }) => assert_eq!((line, col), (3, 23)),
        other => panic!("expected a lexical error, got {other:?}"),
    }
    assert_eq!(
        parse_domain(&data("bad/unknown-requirement.pddl")),
        Err(ParseError::UnknownRequirement(":adl".into()))
    );
    assert_eq!(
        parse_domain(&data("bad/arity.pddl")),
        Err(ParseError::ArityMismatch {
            predicate: "holding".into(),
            expected: 1,
            found: 2
        })
    );
    assert_eq!(
        parse_domain(&data("bad/undeclared-predicate.pddl")),
        Err(ParseError::UndeclaredPredicate("waving".into()))
    );
    assert!(matches!(
        parse_domain(&data("bad/type-mismatch.pddl")),
        Err(ParseError::TypeMismatch { .. })
    ));
    let err = parse_domain(&data("bad/arity.pddl")).unwrap_err().to_string();
    assert!(err.contains("holding"), "{err}");
}

#[test]
fn problem_errors() {
    let d = manipulation();
    let wrong_domain = "(define (problem p) (:domain gripper) (:init) (:goal (handempty)))";
    assert!(matches!(
        parse_problem(wrong_domain, &d),
        Err(ParseError::DomainMismatch { .. })
    ));
    let ill_typed = "(define (problem p) (:domain manipulation) (:objects r - rack) (:init) (:goal (holding r)))";
    assert!(matches!(parse_problem(ill_typed, &d), Err(ParseError::TypeMismatch { .. })));
    let unknown = "(define (problem p) (:domain manipulation) (:init) (:goal (holding ghost)))";
    assert!(matches!(parse_problem(unknown, &d), Err(ParseError::Undeclared { .. })));
}

// ---------------------------------------------------------------- search

#[test]
fn every_yielded_skeleton_is_sound_minimal_and_ordered() {
    for (d, problems) in corpus() {
        for p in problems {
            let all: Vec<_> = plan_skeletons(&d, &p, 6).collect();
            assert!(!all.is_empty(), "{}", p.name);
            let mut seen = BTreeSet::new();
            for (k, sk) in all.iter().enumerate() {
                let end = replay(&d, &p, sk).unwrap_or_else(|| panic!("{}: illegal step in {sk:?}", p.name));
                assert!(satisfies(&end, &p.goal), "{}: {sk:?}", p.name);
                assert!(k == 0 || all[k - 1].len() <= sk.len(), "lengths must not decrease");
                for cut in 0..sk.len() {
                    let mid = replay(&d, &p, &sk[..cut]).unwrap();
                    assert!(!satisfies(&mid, &p.goal), "{}: {sk:?} extends a solution", p.name);
                }
                assert!(seen.insert(sk.clone()), "duplicate skeleton");
            }
            let shortest = exhaustive_shortest(&d, &p, 6).unwrap();
            let first_len = shortest.iter().next().unwrap().len();
            assert_eq!(all[0].len(), first_len, "{}", p.name);
            assert!(shortest.contains(&all[0]));
            assert_eq!(plan_skeletons(&d, &p, 6).collect::<Vec<_>>(), all, "deterministic");
        }
    }
}

#[test]
fn known_optimal_lengths() {
    let bw = domain("blocksworld.pddl");
    let sussman = parse_problem(&data("sussman.pddl"), &bw).unwrap();
    assert_eq!(plan_skeletons(&bw, &sussman, 10).next().unwrap().len(), 6);
    assert_eq!(plan_skeletons(&bw, &sussman, 5).count(), 0, "no solution within 5 steps");
    let gr = domain("gripper.pddl");
    let two = parse_problem(&data("gripper-2.pddl"), &gr).unwrap();
    assert_eq!(plan_skeletons(&gr, &two, 10).next().unwrap().len(), 5);
}

#[test]
fn satisfied_goal_yields_the_empty_skeleton_first() {
    let gr = domain("gripper.pddl");
    let p = parse_problem(&data("gripper-solved.pddl"), &gr).unwrap();
    let all: Vec<_> = plan_skeletons(&gr, &p, 4).collect();
    assert_eq!(all, vec![Vec::<GroundAction>::new()]);
}

#[test]
fn hook_skeleton_is_the_shortest_for_an_unreachable_block() {
    let d = manipulation();
    let p = parse_problem(&data("hook-reach.pddl"), &d).unwrap();
    let first = plan_skeletons(&d, &p, 10).next().unwrap();
    assert_eq!(first, hook_skeleton());
    let shortest = exhaustive_shortest(&d, &p, 4).unwrap();
    assert_eq!(shortest, BTreeSet::from([hook_skeleton()]));
    assert_eq!(plan_skeletons(&d, &p, 3).count(), 0);
}

#[test]
fn world_problem_matches_the_hand_written_one() {
    let d = manipulation();
    let file = parse_problem(&data("hook-reach.pddl"), &d).unwrap();
    let spec = hook_reach_problem(false);
    for s in 0..20 {
        let w = sample_initial(&spec.scenario, s).unwrap();
        let names = default_names(&w);
        assert_eq!(names, ["table", "rack", "hook", "block"]);
        let p = problem_from_world("hook-reach", &d, &w, &names, spec.goal.clone());
        assert_eq!(p.objects, file.objects);
        assert_eq!(init(&p), init(&file));
        assert_eq!(p.goal, file.goal);
        assert_eq!(plan_skeletons(&d, &p, 10).next().unwrap(), hook_skeleton());
    }
    let inside = hook_reach_problem(true);
    let w = sample_initial(&inside.scenario, 0).unwrap();
    let names = default_names(&w);
    let p = problem_from_world("inside", &d, &w, &names, inside.goal);
    assert_eq!(
        plan_skeletons(&d, &p, 10).next().unwrap(),
        vec![act("pick", &["block", "table"])]
    );
}

/// Random blocks-world instances over three blocks: the enumerator's first
/// skeleton has the exhaustive shortest length, and all yielded skeletons
/// replay soundly.
fn arb_blocks_problem() -> impl Strategy<Value = PddlProblem> {
    // Towers as permutations with cut points, for init and goal.
    let tower = (Just(vec!["a", "b", "c"]).prop_shuffle(), 0..4usize, 0..4usize);
    (tower.clone(), tower, 1..4usize).prop_map(|(init_t, goal_t, goal_atoms)| {
        let stacks = |(order, c1, c2): (Vec<&str>, usize, usize)| {
            let (lo, hi) = (c1.min(c2), c1.max(c2));
            let mut atoms = Vec::new();
            for part in [&order[..lo], &order[lo..hi], &order[hi..]] {
                if let Some((bottom, _)) = part.split_first() {
                    atoms.push(GroundAtom::new("ontable", &[bottom]));
                }
                for w in part.windows(2) {
                    atoms.push(GroundAtom::new("on", &[w[1], w[0]]));
                }
                if let Some(top) = part.last() {
                    atoms.push(GroundAtom::new("clear", &[top]));
                }
            }
            atoms
        };
        let mut init = stacks(init_t);
        init.push(GroundAtom::new("handempty", &[]));
        let goal = stacks(goal_t)
            .into_iter()
            .take(goal_atoms)
            .map(|atom| GroundLiteral { atom, positive: true })
            .collect();
        PddlProblem {
            name: "random".into(),
            domain: "blocksworld".into(),
            objects: ["a", "b", "c"]
                .iter()
                .map(|n| Typed {
                    name: n.to_string(),
                    ty: "block".into(),
                })
                .collect(),
            init,
            goal,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_blocks_problems_agree_with_exhaustive_search(p in arb_blocks_problem()) {
        let d = domain("blocksworld.pddl");
        let all: Vec<_> = plan_skeletons(&d, &p, 4).collect();
        let shortest = exhaustive_shortest(&d, &p, 4);
        prop_assert_eq!(all.is_empty(), shortest.is_none());
        if let Some(shortest) = shortest {
            prop_assert_eq!(all[0].len(), shortest.iter().next().unwrap().len());
            prop_assert!(shortest.contains(&all[0]));
        }
        for (k, sk) in all.iter().enumerate() {
            let end = replay(&d, &p, sk);
            prop_assert!(end.is_some_and(|s| satisfies(&s, &p.goal)));
            prop_assert!(k == 0 || all[k - 1].len() <= sk.len());
        }
    }
}

// ------------------------------------------------------------ abstraction

fn world(objects: Vec<ObjectState>) -> WorldState {
    WorldState::new(objects, WorldParams::default())
}

fn bench_roster(block_x: f64) -> WorldState {
    let p = WorldParams::default();
    world(vec![
        ObjectState::table(),
        ObjectState::new(ObjectKind::Rack, scenarios::RACK_X, p.rack_half_width),
        ObjectState::new(ObjectKind::Hook, 0.3, p.hook_half_length),
        ObjectState::new(ObjectKind::Block, block_x, p.block_half_width),
    ])
}

#[test]
fn abstraction_examples() {
    let w = bench_roster(0.7);
    let names = default_names(&w);
    let s = state_abstraction(&w, &names);
    assert!(s.contains(&GroundAtom::new("handempty", &[])));
    assert!(!s.contains(&GroundAtom::new("inworkspace", &["block"])));
    assert!(s.contains(&GroundAtom::new("inworkspace", &["hook"])));
    assert!(s.contains(&GroundAtom::new("on", &["block", "table"])));
    assert!(!s.contains(&GroundAtom::new("clear", &["table"])));

    let w = bench_roster(0.4);
    let (next, r) = step(&w, &SkillInstance::new(SkillId::Pick, &[scenarios::BLOCK, scenarios::TABLE]), &[0.0]).unwrap();
    assert_eq!(r, 1);
    let s = state_abstraction(&next, &names);
    assert!(s.contains(&GroundAtom::new("holding", &["block"])));
    assert!(!s.contains(&GroundAtom::new("handempty", &[])));
    assert!(!s.contains(&GroundAtom::new("on", &["block", "table"])));

    let empty = world(vec![ObjectState::table()]);
    let s = state_abstraction(&empty, &default_names(&empty));
    assert_eq!(
        s,
        BTreeSet::from([GroundAtom::new("handempty", &[]), GroundAtom::new("clear", &["table"])])
    );
}

#[test]
fn default_names_index_repeated_kinds() {
    let w = sample_initial(&scenarios::distractor_problem().scenario, 0).unwrap();
    assert_eq!(default_names(&w), ["table", "rack", "hook", "block0", "block1"]);
}

/// For rewarded ground-truth transitions, the matching operator's effects
/// hold after. Preconditions are not implied: a pull can succeed on a block
/// that already lies inside the workspace.
#[test]
fn abstraction_is_consistent_with_rewarded_transitions() {
    let d = manipulation();
    let mut rng = seed::rng(2024);
    let mut per_skill = [0usize; 4];
    let mut total = 0;
    let mut attempts = 0;
    while total < 1000 {
        attempts += 1;
        assert!(attempts < 2_000_000, "too few rewarded transitions: {per_skill:?}");
        let k = seed::below(&mut rng, 4);
        let skill = SkillId::ALL[k];
        if per_skill[k] >= 250 {
            continue;
        }
        let w = sample_initial(&training_scenario(skill), rng_u64(&mut rng)).unwrap();
        let names = default_names(&w);
        let op = d.operators.iter().find(|o| o.name == skill.name()).unwrap();
        // Random well-typed arguments.
        let mut args = Vec::new();
        for param in &op.params {
            let fits: Vec<usize> = (0..w.objects.len())
                .filter(|&i| match d.constant_type(&names[i]) {
                    Some(ty) => d.is_subtype(ty, &param.ty),
                    None => d.is_subtype(pddl_type(w.objects[i].kind), &param.ty),
                })
                .collect();
            args.push(fits[seed::below(&mut rng, fits.len())]);
        }
        let inst = SkillInstance::new(skill, &args);
        let b = skill.action_bounds();
        let a = [seed::uniform(&mut rng, b.lo[0], b.hi[0])];
        let (next, r) = step(&w, &inst, &a).unwrap();
        if r != 1 {
            continue;
        }
        per_skill[k] += 1;
        total += 1;
        let arg_names: Vec<String> = args.iter().map(|&i| names[i].clone()).collect();
        let binding = bind(op, &arg_names);
        let after = state_abstraction(&next, &names);
        for l in &op.effects {
            assert_eq!(after.contains(&ground(l, &binding)), l.positive, "{inst} effect {l:?} in {after:?}");
        }
    }
    assert!(per_skill.iter().all(|&n| n == 250), "{per_skill:?}");
}

fn rng_u64(rng: &mut seed::Rng) -> u64 {
    (seed::unit(rng) * (1u64 << 53) as f64) as u64
}

// ------------------------------------------------------------------ solve

fn library() -> &'static SkillLibrary {
    static LIB: OnceLock<SkillLibrary> = OnceLock::new();
    LIB.get_or_init(|| {
        let mut lib = SkillLibrary::new();
        for cfg in default_skill_configs() {
            lib.insert(train_skill(&cfg, 7, 0).unwrap().0).unwrap();
        }
        lib
    })
}

fn tamp_cfg(seed: u64) -> TampConfig {
    TampConfig {
        planner: PlannerConfig {
            method: PlannerMethod::PolicyCem,
            seed,
            num_samples: 200,
            ..Default::default()
        },
        ..Default::default()
    }
}

#[test]
fn reachable_block_is_picked_directly_near_the_single_skill_optimum() {
    let d = manipulation();
    let spec = hook_reach_problem(true);
    let lib = library();
    let uq = UncertaintyConfig::default();
    for s in 0..5 {
        let w = sample_initial(&spec.scenario, s).unwrap();
        let names = default_names(&w);
        let p = problem_from_world(&spec.name, &d, &w, &names, spec.goal.clone());
        let out = tamp_solve(lib, &d, &p, &w, &names, &tamp_cfg(s), &NoClock, &Serial).unwrap();
        assert_eq!(out.skeleton, vec![act("pick", &["block", "table"])]);
        let b = SkillId::Pick.action_bounds();
        let best = (0..=400)
            .map(|i| {
                let a = b.lo[0] + (b.hi[0] - b.lo[0]) * i as f64 / 400.0;
                evaluate_objective(lib, &out.instances, &ActionPlan::new(vec![vec![a]]), &w, &uq)
                    .unwrap()
                    .j
            })
            .fold(0.0, f64::max);
        assert!(out.result.j >= best - 0.05, "J {} vs grid optimum {best}", out.result.j);
    }
}

#[test]
fn unsolvable_and_budget_diagnostics() {
    let d = manipulation();
    let spec = hook_reach_problem(false);
    let w = sample_initial(&spec.scenario, 0).unwrap();
    let names = default_names(&w);
    let p = problem_from_world(&spec.name, &d, &w, &names, spec.goal.clone());
    let cfg = TampConfig {
        max_len: 3,
        ..tamp_cfg(0)
    };
    let err = tamp_solve(library(), &d, &p, &w, &names, &cfg, &NoClock, &Serial).unwrap_err();
    assert!(matches!(err, skillseq_core::Error::Unsolvable { max_len: 3 }), "{err:?}");
    let cfg = TampConfig {
        max_len: 0,
        ..tamp_cfg(0)
    };
    assert!(tamp_solve(library(), &d, &p, &w, &names, &cfg, &NoClock, &Serial).is_err());
}

/// A clock that is always past the deadline.
struct Expired;

impl Clock for Expired {
    fn elapsed_ms(&self) -> u64 {
        u64::MAX
    }
}

#[test]
fn timeout_without_incumbent_is_reported() {
    let d = manipulation();
    let spec = hook_reach_problem(false);
    let w = sample_initial(&spec.scenario, 0).unwrap();
    let names = default_names(&w);
    let p = problem_from_world(&spec.name, &d, &w, &names, spec.goal.clone());
    let cfg = TampConfig {
        timeout_ms: Some(10),
        ..tamp_cfg(0)
    };
    let err = tamp_solve(library(), &d, &p, &w, &names, &cfg, &Expired, &Serial).unwrap_err();
    assert!(matches!(err, skillseq_core::Error::Timeout { .. }), "{err:?}");
}
