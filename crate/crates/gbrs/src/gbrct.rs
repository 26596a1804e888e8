//! The granular-ball rough concept tree: a layered knowledge structure
//! over a reduct. Layer `k` granulates the boundary extents of layer
//! `k-1` on the length-`k` reduct prefix; pure balls become terminating
//! positive nodes, mixed balls descend.

use serde::{Deserialize, Serialize};

use crate::dataset::DecisionSystem;
use crate::granular_ball::{gbnrs_pipeline_on, generate_balls_degenerate_on, RadiusMode};
use crate::roughset::{offender_balls, Reduct};
use crate::Result;

/// How each layer's balls are produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BallGen {
    /// Full pipeline with the given size lower bound.
    Gbnrs { lbs: usize, radius_mode: RadiusMode },
    /// Exact-value-equality balls (radius zero on discrete data).
    Degenerate,
}

/// A node's descriptive condition: its ball geometry on the layer prefix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Intent {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NodeKind {
    /// All extent samples share this label; the node terminates.
    Positive { label: usize },
    /// Mixed extent; `majority` is the fallback label for classification.
    Boundary { majority: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConceptNode {
    /// Creation index in construction order; the universal tie-break key.
    pub id: usize,
    /// 1-based layer.
    pub layer: usize,
    /// The reduct prefix this node was generated on.
    pub attributes_so_far: Vec<usize>,
    pub intent: Intent,
    /// Sorted sample ids.
    pub extent: Vec<usize>,
    pub kind: NodeKind,
    pub children: Vec<ConceptNode>,
}

impl ConceptNode {
    pub fn is_positive(&self) -> bool {
        matches!(self.kind, NodeKind::Positive { .. })
    }
}

/// The layered concept tree over a reduct.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gbrct {
    pub roots: Vec<ConceptNode>,
    pub reduct: Reduct,
    /// The attribute each layer adds (shown beside the layer when drawn).
    pub layer_attributes: Vec<usize>,
    pub label_names: Vec<String>,
    pub ball_gen: BallGen,
}

/// Outcome of a tree descent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub label: usize,
    /// Node ids visited, root to terminal.
    pub path: Vec<usize>,
    /// True when the descent ended in a positive node; false means the
    /// final boundary node's majority label was used.
    pub confident: bool,
}

/// Builds the tree: layer `k` runs the ball pipeline on the reduct prefix
/// of length `k`, restricted to each layer-`k-1` boundary node's extent
/// (layer 1 runs on all of `U`).
pub fn build_tree(ds: &DecisionSystem, reduct: &Reduct, ball_gen: BallGen) -> Gbrct {
    assert!(!reduct.selected.is_empty(), "cannot build a tree on an empty reduct");
    let mut next_id = 0;
    let all: Vec<usize> = (0..ds.n()).collect();
    let roots = build_layer(ds, reduct, ball_gen, 1, &all, &mut next_id);
    Gbrct {
        roots,
        reduct: reduct.clone(),
        layer_attributes: reduct.selected.clone(),
        label_names: ds.label_names().to_vec(),
        ball_gen,
    }
}

fn build_layer(
    ds: &DecisionSystem,
    reduct: &Reduct,
    ball_gen: BallGen,
    layer: usize,
    members: &[usize],
    next_id: &mut usize,
) -> Vec<ConceptNode> {
    let prefix = reduct.prefix(layer, ds.d());
    let bs = match ball_gen {
        BallGen::Gbnrs { lbs, radius_mode } => {
            gbnrs_pipeline_on(ds, &prefix, lbs, members, radius_mode)
        }
        BallGen::Degenerate => generate_balls_degenerate_on(ds, &prefix, members),
    };
    let offenders = offender_balls(&bs);
    let mut nodes = Vec::with_capacity(bs.balls.len());
    for (idx, ball) in bs.balls.iter().enumerate() {
        let id = *next_id;
        *next_id += 1;
        let positive = ball.is_pure() && !offenders.contains(&idx);
        let kind = if positive {
            NodeKind::Positive { label: ball.label }
        } else {
            NodeKind::Boundary {
                majority: ball.label,
            }
        };
        let children = if !positive && layer < reduct.selected.len() {
            build_layer(ds, reduct, ball_gen, layer + 1, &ball.members, next_id)
        } else {
            Vec::new()
        };
        nodes.push(ConceptNode {
            id,
            layer,
            attributes_so_far: prefix.indexes().to_vec(),
            intent: Intent {
                center: ball.center.clone(),
                radius: ball.radius,
            },
            extent: ball.members.clone(),
            kind,
            children,
        });
    }
    nodes
}

impl Gbrct {
    /// Classifies a sample (given over all `d` attributes, scaled with the
    /// training min/max) by descending to the nearest ball per layer.
    pub fn classify(&self, sample: &[f64]) -> Classification {
        let mut candidates = &self.roots;
        let mut path = Vec::new();
        loop {
            let node = candidates
                .iter()
                .min_by(|a, b| {
                    score(a, sample)
                        .partial_cmp(&score(b, sample))
                        .unwrap()
                        .then(a.id.cmp(&b.id))
                })
                .expect("tree layers are never empty");
            path.push(node.id);
            match node.kind {
                NodeKind::Positive { label } => {
                    return Classification {
                        label,
                        path,
                        confident: true,
                    }
                }
                NodeKind::Boundary { majority } => {
                    if node.children.is_empty() {
                        return Classification {
                            label: majority,
                            path,
                            confident: false,
                        };
                    }
                    candidates = &node.children;
                }
            }
        }
    }

    /// Positive-node extents at the given 1-based layer, sorted.
    pub fn positive_extent_at_layer(&self, layer: usize) -> Vec<usize> {
        let mut out = Vec::new();
        collect_positive(&self.roots, layer, &mut out);
        out.sort_unstable();
        out
    }

    /// Boundary-node extents at the given 1-based layer, sorted.
    pub fn boundary_extent_at_layer(&self, layer: usize) -> Vec<usize> {
        let mut out = Vec::new();
        collect_boundary(&self.roots, layer, &mut out);
        out.sort_unstable();
        out
    }

    pub fn depth(&self) -> usize {
        self.layer_attributes.len()
    }

    /// Graphviz rendering: one box per node showing layer, center and
    /// radius (4 decimals), extent size, and the class or "?".
    pub fn export_dot(&self) -> String {
        let mut out = String::from("digraph gbrct {\n  node [shape=box, fontname=\"monospace\"];\n");
        let mut edges = String::new();
        for node in &self.roots {
            self.dot_node(node, &mut out, &mut edges);
        }
        out.push_str(&edges);
        out.push_str("}\n");
        out
    }

    fn dot_node(&self, node: &ConceptNode, nodes: &mut String, edges: &mut String) {
        let center = node
            .intent
            .center
            .iter()
            .map(|v| format!("{v:.4}"))
            .collect::<Vec<_>>()
            .join(", ");
        let class = match node.kind {
            NodeKind::Positive { label } => self.label_names[label].clone(),
            NodeKind::Boundary { .. } => "?".into(),
        };
        nodes.push_str(&format!(
            "  n{} [label=\"layer {}\\nc=({}) r={:.4}\\n|extent|={}\\n{}\"];\n",
            node.id,
            node.layer,
            center,
            node.intent.radius,
            node.extent.len(),
            escape_dot(&class),
        ));
        for child in &node.children {
            edges.push_str(&format!("  n{} -> n{};\n", node.id, child.id));
            self.dot_node(child, nodes, edges);
        }
    }

    /// Lossless JSON of the whole tree.
    pub fn export_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn score(node: &ConceptNode, sample: &[f64]) -> f64 {
    let dist = node
        .attributes_so_far
        .iter()
        .zip(&node.intent.center)
        .map(|(&j, c)| {
            let v = sample[j] - c;
            v * v
        })
        .sum::<f64>()
        .sqrt();
    dist - node.intent.radius
}

fn collect_positive(nodes: &[ConceptNode], layer: usize, out: &mut Vec<usize>) {
    for node in nodes {
        if node.layer == layer && node.is_positive() {
            out.extend(node.extent.iter().copied());
        }
        collect_positive(&node.children, layer, out);
    }
}

fn collect_boundary(nodes: &[ConceptNode], layer: usize, out: &mut Vec<usize>) {
    for node in nodes {
        if node.layer == layer && !node.is_positive() {
            out.extend(node.extent.iter().copied());
        }
        collect_boundary(&node.children, layer, out);
    }
}

fn escape_dot(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Checks the per-layer agreement between positive-node extents and the
/// region oracle the tree was generated with. Used by tests.
pub fn layer_region_agreement(ds: &DecisionSystem, tree: &Gbrct) -> bool {
    use crate::roughset::gbrs_positive_region;
    for layer in 1..=tree.depth() {
        let parents: Vec<Vec<usize>> = if layer == 1 {
            vec![(0..ds.n()).collect()]
        } else {
            parent_extents(&tree.roots, layer - 1)
        };
        let prefix = tree.reduct.prefix(layer, ds.d());
        let mut expected = Vec::new();
        for extent in &parents {
            if extent.is_empty() {
                continue;
            }
            let bs = match tree.ball_gen {
                BallGen::Gbnrs { lbs, radius_mode } => {
                    gbnrs_pipeline_on(ds, &prefix, lbs, extent, radius_mode)
                }
                BallGen::Degenerate => generate_balls_degenerate_on(ds, &prefix, extent),
            };
            expected.extend(gbrs_positive_region(&bs, ds).positive);
        }
        expected.sort_unstable();
        if expected != tree.positive_extent_at_layer(layer) {
            return false;
        }
    }
    true
}

fn parent_extents(nodes: &[ConceptNode], layer: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for node in nodes {
        if node.layer == layer && !node.is_positive() && !node.children.is_empty() {
            out.push(node.extent.clone());
        }
        out.extend(parent_extents(&node.children, layer));
    }
    out
}
