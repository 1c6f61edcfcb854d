//! Reference presentations and Brauer graphs used by the test suites and
//! examples, plus deterministic random generators for special biserial
//! presentations and strings.

use crate::brauer::{bga_presentation, parse_brauer_graph, BrauerGraph};
use crate::quiver::{parse_presentation, Letter, Presentation, Walk};
use crate::words::{is_string, StringWord};

pub const KRONECKER: &str = "\
# two parallel arrows
vertices: 1 2
arrow a: 1 -> 2
arrow b: 1 -> 2
";

/// Two Kronecker pairs chained, mixed compositions killed.
pub const CHAINED_KRONECKER: &str = "\
vertices: 1 2 3
arrow a: 1 -> 2
arrow b: 1 -> 2
arrow c: 2 -> 3
arrow d: 2 -> 3
relation: a d
relation: b c
";

/// One vertex, two loops, radical square zero on one side.
pub const TWO_LOOP_GENTLE: &str = "\
vertices: 1
arrow x: 1 -> 1
arrow y: 1 -> 1
relation: x x
relation: y y
relation: x y
";

pub const LINEAR_A2: &str = "\
vertices: 1 2
arrow a: 1 -> 2
";

pub fn kronecker() -> Presentation {
    parse_presentation(KRONECKER).unwrap()
}

pub fn chained_kronecker() -> Presentation {
    parse_presentation(CHAINED_KRONECKER).unwrap()
}

pub fn two_loop_gentle() -> Presentation {
    parse_presentation(TWO_LOOP_GENTLE).unwrap()
}

pub fn linear_a2() -> Presentation {
    parse_presentation(LINEAR_A2).unwrap()
}

pub const BG_STAR_TREE: &str = "\
# four edges around a center, mixed multiplicities
edges: e1 e2 e3 e4
vertex c mult=1 cyclic=(e1 e2 e3 e4)
vertex l1 mult=1 cyclic=(e1)
vertex l2 mult=2 cyclic=(e2)
vertex l3 mult=1 cyclic=(e3)
vertex l4 mult=3 cyclic=(e4)
";

pub const BG_DOUBLE_EDGE: &str = "\
edges: e1 e2
vertex v1 mult=1 cyclic=(e1 e2)
vertex v2 mult=1 cyclic=(e1 e2)
";

pub const BG_TRIANGLE: &str = "\
edges: e1 e2 e3
vertex v1 mult=1 cyclic=(e3 e1)
vertex v2 mult=1 cyclic=(e1 e2)
vertex v3 mult=1 cyclic=(e2 e3)
";

pub const BG_SQUARE: &str = "\
edges: e1 e2 e3 e4
vertex v1 mult=1 cyclic=(e4 e1)
vertex v2 mult=1 cyclic=(e1 e2)
vertex v3 mult=1 cyclic=(e2 e3)
vertex v4 mult=1 cyclic=(e3 e4)
";

pub const BG_TWO_LOOPS: &str = "\
# two loops at a single vertex
edges: e1 e2
vertex v mult=1 cyclic=(e1 e1 e2 e2)
";

pub const BG_TWO_TRIANGLES: &str = "\
# two triangles joined by a path
edges: e1 e2 e3 f1 f2 f3 g1
vertex a1 mult=1 cyclic=(e3 e1 g1)
vertex a2 mult=1 cyclic=(e1 e2)
vertex a3 mult=1 cyclic=(e2 e3)
vertex b1 mult=1 cyclic=(f3 f1 g1)
vertex b2 mult=1 cyclic=(f1 f2)
vertex b3 mult=1 cyclic=(f2 f3)
";

pub fn bg_star_tree() -> BrauerGraph {
    parse_brauer_graph(BG_STAR_TREE).unwrap()
}

pub fn bg_double_edge() -> BrauerGraph {
    parse_brauer_graph(BG_DOUBLE_EDGE).unwrap()
}

pub fn bg_triangle() -> BrauerGraph {
    parse_brauer_graph(BG_TRIANGLE).unwrap()
}

pub fn bg_square() -> BrauerGraph {
    parse_brauer_graph(BG_SQUARE).unwrap()
}

pub fn bg_two_loops() -> BrauerGraph {
    parse_brauer_graph(BG_TWO_LOOPS).unwrap()
}

pub fn bg_two_triangles() -> BrauerGraph {
    parse_brauer_graph(BG_TWO_TRIANGLES).unwrap()
}

/// The corpus of presentations shared by the invariant suites: the named
/// small algebras, four Brauer graph presentations, and three seeded random
/// special biserial presentations.
pub fn corpus_presentations() -> Vec<(String, Presentation)> {
    let mut out = vec![
        ("kronecker".to_string(), kronecker()),
        ("chained-kronecker".to_string(), chained_kronecker()),
        ("two-loop-gentle".to_string(), two_loop_gentle()),
        (
            "bg-double-edge".to_string(),
            bga_presentation(&bg_double_edge()),
        ),
        ("bg-triangle".to_string(), bga_presentation(&bg_triangle())),
        (
            "bg-two-loops".to_string(),
            bga_presentation(&bg_two_loops()),
        ),
        (
            "bg-star-tree".to_string(),
            bga_presentation(&bg_star_tree()),
        ),
    ];
    for seed in [1u64, 2, 3] {
        out.push((format!("random-sb-{seed}"), random_special_biserial(seed)));
    }
    out
}

/// xorshift64*; deterministic across platforms.
#[derive(Clone, Debug)]
pub struct Rng64 {
    state: u64,
}

impl Rng64 {
    pub fn new(seed: u64) -> Self {
        Rng64 { state: seed.max(1) }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Deterministic special biserial presentation: a small quiver with vertex
/// degrees at most two, relations pruning every arrow to at most one
/// surviving successor and predecessor, and one extra relation per
/// surviving directed cycle so the ideal is admissible.
pub fn random_special_biserial(seed: u64) -> Presentation {
    let mut rng = Rng64::new(seed.wrapping_mul(0x9E3779B97F4A7C15).max(1));
    let n_vertices = 3 + rng.below(3);
    let target_arrows = n_vertices + 1 + rng.below(n_vertices);
    let mut text = String::new();
    text.push_str("vertices:");
    for v in 1..=n_vertices {
        text.push_str(&format!(" {v}"));
    }
    text.push('\n');

    let mut out_deg = vec![0usize; n_vertices + 1];
    let mut in_deg = vec![0usize; n_vertices + 1];
    let mut arrows: Vec<(String, usize, usize)> = Vec::new();
    let names = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l"];
    let mut attempts = 0;
    while arrows.len() < target_arrows && attempts < 200 {
        attempts += 1;
        let s = 1 + rng.below(n_vertices);
        let t = 1 + rng.below(n_vertices);
        if out_deg[s] >= 2 || in_deg[t] >= 2 {
            continue;
        }
        let name = names[arrows.len()].to_string();
        out_deg[s] += 1;
        in_deg[t] += 1;
        arrows.push((name, s, t));
    }
    for (name, s, t) in &arrows {
        text.push_str(&format!("arrow {name}: {s} -> {t}\n"));
    }

    // prune successors: keep at most one composable continuation per arrow
    let mut dead: Vec<(String, String)> = Vec::new();
    let mut survives: Vec<(usize, usize)> = Vec::new();
    for (i, (_, _, t)) in arrows.iter().enumerate() {
        let mut succ: Vec<usize> = arrows
            .iter()
            .enumerate()
            .filter(|(_, (_, s, _))| s == t)
            .map(|(j, _)| j)
            .collect();
        if succ.is_empty() {
            continue;
        }
        let keep = succ.remove(rng.below(succ.len()));
        survives.push((i, keep));
        for j in succ {
            dead.push((arrows[i].0.clone(), arrows[j].0.clone()));
        }
    }
    // prune predecessors: if an arrow kept two surviving predecessors, keep one
    for j in 0..arrows.len() {
        let preds: Vec<usize> = survives
            .iter()
            .filter(|(_, k)| *k == j)
            .map(|(i, _)| *i)
            .collect();
        for (extra_index, &i) in preds.iter().enumerate() {
            if extra_index > 0 {
                dead.push((arrows[i].0.clone(), arrows[j].0.clone()));
                survives.retain(|&(a, b)| !(a == i && b == j));
            }
        }
    }
    // break surviving directed cycles (each arrow now has at most one
    // surviving successor, so the surviving graph is functional)
    let succ_of: Vec<Option<usize>> = (0..arrows.len())
        .map(|i| survives.iter().find(|(a, _)| *a == i).map(|(_, b)| *b))
        .collect();
    let mut broken: Vec<usize> = Vec::new();
    for start in 0..arrows.len() {
        let mut seen = vec![false; arrows.len()];
        let mut cur = start;
        loop {
            if broken.contains(&cur) {
                break;
            }
            if seen[cur] {
                // cycle found; kill the composition leaving `cur`
                if let Some(next) = succ_of[cur] {
                    dead.push((arrows[cur].0.clone(), arrows[next].0.clone()));
                    broken.push(cur);
                }
                break;
            }
            seen[cur] = true;
            match succ_of[cur] {
                Some(next) => cur = next,
                None => break,
            }
        }
    }
    dead.sort();
    dead.dedup();
    for (a, b) in &dead {
        text.push_str(&format!("relation: {a} {b}\n"));
    }

    let pres = parse_presentation(&text).expect("generated text parses");
    debug_assert!(pres.is_special_biserial().is_special_biserial(), "{text}");
    debug_assert!(pres.check_admissible().is_admissible(), "{text}");
    pres
}

/// Random walk extension until the target length or a dead end; returns a
/// string by construction.
pub fn random_string(pres: &Presentation, rng: &mut Rng64, target_len: usize) -> StringWord {
    let quiver = &pres.quiver;
    if quiver.arrows.is_empty() || target_len == 0 {
        let v = quiver.vertices[rng.below(quiver.vertices.len().max(1))].clone();
        return StringWord::trivial(v);
    }
    let mut letters: Vec<Letter> = Vec::new();
    let start = &quiver.arrows[rng.below(quiver.arrows.len())];
    let first = if rng.below(2) == 0 {
        Letter::direct(start.id.clone())
    } else {
        Letter::inverse(start.id.clone())
    };
    letters.push(first);
    while letters.len() < target_len {
        let at = quiver.letter_target(letters.last().unwrap());
        let mut options: Vec<Letter> = quiver
            .letters_from(&at)
            .into_iter()
            .filter(|l| *l != letters.last().unwrap().inverted())
            .collect();
        // deterministic shuffle-by-draw
        let mut extended = false;
        while !options.is_empty() {
            let pick = options.remove(rng.below(options.len()));
            letters.push(pick);
            if is_string(pres, &Walk::Word(letters.clone())) {
                extended = true;
                break;
            }
            letters.pop();
        }
        if !extended {
            break;
        }
    }
    StringWord::new(pres, Walk::Word(letters)).expect("walk extended within the string condition")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_parses_and_is_special_biserial() {
        let corpus = corpus_presentations();
        assert!(corpus.len() >= 10);
        for (name, pres) in &corpus {
            assert!(
                pres.is_special_biserial().is_special_biserial(),
                "{name} is not special biserial"
            );
            assert!(
                pres.check_admissible().is_admissible(),
                "{name} is not admissible"
            );
        }
    }

    #[test]
    fn random_generators_are_deterministic() {
        let a = random_special_biserial(7);
        let b = random_special_biserial(7);
        assert_eq!(a.to_dsl(), b.to_dsl());
        let mut r1 = Rng64::new(42);
        let mut r2 = Rng64::new(42);
        let p = chained_kronecker();
        for _ in 0..10 {
            assert_eq!(
                random_string(&p, &mut r1, 12).to_string(),
                random_string(&p, &mut r2, 12).to_string()
            );
        }
    }

    #[test]
    fn random_strings_are_strings() {
        let mut rng = Rng64::new(5);
        for (_, pres) in corpus_presentations() {
            for _ in 0..20 {
                let s = random_string(&pres, &mut rng, 20);
                assert!(is_string(&pres, s.walk()));
            }
        }
    }
}
