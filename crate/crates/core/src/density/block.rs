use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exactmath::multi::is_identifier;
use crate::exactmath::Bound;
use crate::shapes::{Cell, Poset};

/// One integration layer: `lower < name < upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockVar {
    pub name: String,
    pub lower: Bound,
    pub upper: Bound,
}

impl BlockVar {
    pub fn new(name: &str, lower: Bound, upper: Bound) -> Self {
        BlockVar {
            name: name.to_string(),
            lower,
            upper,
        }
    }
}

/// Where each variable of block `k` sits: `(row_offset + k * row_period, col)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Geometry {
    pub row_period: i32,
    pub cells: BTreeMap<String, [i32; 2]>,
}

/// The periodic building block of the density method.
///
/// Variables are listed outermost first. Each bound may name 0, 1, the
/// interface variable, or a variable listed earlier (still free when this
/// layer is integrated). The chain variable carries the previous tower level:
/// the integrand is `p_k(chain)` and the chain variable of block `k` is the
/// interface variable of block `k − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSpec {
    vars: Vec<BlockVar>,
    interface: String,
    chain: String,
    geometry: Option<Geometry>,
}

#[derive(Serialize, Deserialize)]
struct VarJson {
    name: String,
    lower: String,
    upper: String,
}

fn default_interface() -> String {
    "z".to_string()
}

#[derive(Serialize, Deserialize)]
struct BlockJson {
    vars: Vec<VarJson>,
    #[serde(default = "default_interface")]
    interface: String,
    chain: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    geometry: Option<Geometry>,
}

impl BlockSpec {
    /// Builds and validates a block.
    pub fn new(
        vars: Vec<BlockVar>,
        interface: &str,
        chain: &str,
        geometry: Option<Geometry>,
    ) -> Result<Self> {
        let spec = BlockSpec {
            vars,
            interface: interface.to_string(),
            chain: chain.to_string(),
            geometry,
        };
        validate_block(&spec)?;
        Ok(spec)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: BlockJson = serde_json::from_str(text)?;
        let mut vars = Vec::with_capacity(raw.vars.len());
        for v in raw.vars {
            let parse = |s: &str| {
                s.parse::<Bound>()
                    .map_err(|e| Error::usage(format!("variable {}: {e}", v.name)))
            };
            vars.push(BlockVar {
                lower: parse(&v.lower)?,
                upper: parse(&v.upper)?,
                name: v.name,
            });
        }
        BlockSpec::new(vars, &raw.interface, &raw.chain, raw.geometry)
    }

    fn to_raw(&self) -> BlockJson {
        BlockJson {
            vars: self
                .vars
                .iter()
                .map(|v| VarJson {
                    name: v.name.clone(),
                    lower: v.lower.to_string(),
                    upper: v.upper.to_string(),
                })
                .collect(),
            interface: self.interface.clone(),
            chain: self.chain.clone(),
            geometry: self.geometry.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("block serializes")
    }

    /// Hex SHA-256 of the canonical JSON form; identifies the model in tower caches.
    pub fn model_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    pub fn vars(&self) -> &[BlockVar] {
        &self.vars
    }

    pub fn interface(&self) -> &str {
        &self.interface
    }

    pub fn chain(&self) -> &str {
        &self.chain
    }

    pub fn chain_index(&self) -> usize {
        self.var_index(&self.chain).expect("validated")
    }

    pub fn geometry(&self) -> Option<&Geometry> {
        self.geometry.as_ref()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// New cells contributed by each block.
    pub fn cells_per_block(&self) -> usize {
        self.vars.len()
    }

    /// Elements of the unrolled `n`-block structure: `n · cells_per_block + 1`.
    pub fn cell_count(&self, n: usize) -> usize {
        n * self.vars.len() + 1
    }

    /// Variable order used for all multivariate polynomials: interface first,
    /// then the block variables outermost first.
    pub fn poly_vars(&self) -> Vec<String> {
        std::iter::once(self.interface.clone())
            .chain(self.vars.iter().map(|v| v.name.clone()))
            .collect()
    }

    /// The unrolled structure with `n` blocks.
    pub fn layout(&self, n: usize) -> Layout {
        Layout::new(self, n)
    }
}

/// Accepts iff every bound is a constant, the interface, or an outer variable,
/// and each layer's `lower ≤ upper` already follows from the outer constraints
/// (so no `min`/`max` is ever needed). Errors name the offending variable.
pub fn validate_block(spec: &BlockSpec) -> Result<()> {
    if spec.vars.is_empty() {
        return Err(Error::usage("block has no variables"));
    }
    if !is_identifier(&spec.interface) {
        return Err(Error::usage(format!(
            "interface {:?} is not an identifier",
            spec.interface
        )));
    }
    let mut seen: BTreeSet<&str> = BTreeSet::from([spec.interface.as_str()]);
    for v in &spec.vars {
        if !is_identifier(&v.name) {
            return Err(Error::usage(format!("variable name {:?} is not an identifier", v.name)));
        }
        if !seen.insert(&v.name) {
            return Err(Error::usage(format!("variable {} declared twice", v.name)));
        }
    }
    if spec.var_index(&spec.chain).is_none() {
        return Err(Error::usage(format!(
            "chain variable {} is not a block variable",
            spec.chain
        )));
    }

    // Known order relations among the outer symbols, as edges a → b meaning a ≤ b.
    let mut edges: Vec<(String, String)> = vec![
        ("0".into(), spec.interface.clone()),
        (spec.interface.clone(), "1".into()),
    ];
    for (j, v) in spec.vars.iter().enumerate() {
        for b in [&v.lower, &v.upper] {
            if let Bound::Var(name) = b {
                if name == &v.name {
                    return Err(Error::usage(format!(
                        "variable {}: bound refers to itself (cyclic)",
                        v.name
                    )));
                }
                if name != &spec.interface {
                    match spec.var_index(name) {
                        None => {
                            return Err(Error::usage(format!(
                                "variable {}: bound {name} is not declared",
                                v.name
                            )))
                        }
                        Some(i) if i > j => {
                            return Err(Error::usage(format!(
                                "variable {}: bound {name} is integrated before it (cyclic reference)",
                                v.name
                            )))
                        }
                        _ => {}
                    }
                }
            }
        }
        let lo = v.lower.to_string();
        let hi = v.upper.to_string();
        if !implied_le(&edges, &lo, &hi) {
            return Err(Error::usage(format!(
                "variable {}: {lo} ≤ {hi} does not follow from the outer bounds (would need min/max)",
                v.name
            )));
        }
        edges.push((lo, v.name.clone()));
        edges.push((v.name.clone(), hi));
    }

    if let Some(g) = &spec.geometry {
        if g.row_period <= 0 {
            return Err(Error::usage("geometry row_period must be positive"));
        }
        let mut cells = BTreeSet::new();
        for name in spec.poly_vars() {
            let Some(c) = g.cells.get(&name) else {
                return Err(Error::usage(format!("geometry misses variable {name}")));
            };
            if !cells.insert(*c) {
                return Err(Error::usage(format!("geometry is not injective at {c:?}")));
            }
        }
        if g.cells.len() != spec.vars.len() + 1 {
            return Err(Error::usage("geometry names unknown variables"));
        }
        // The chain cell of block k must coincide with the interface cell of block k − 1.
        let chain = g.cells[&spec.chain];
        let iface = g.cells[&spec.interface];
        if chain != [iface[0] - g.row_period, iface[1]] {
            return Err(Error::usage(
                "geometry: chain cell must be the interface cell one period lower",
            ));
        }
    }
    Ok(())
}

fn implied_le(edges: &[(String, String)], from: &str, to: &str) -> bool {
    if from == to || from == "0" || to == "1" {
        return true;
    }
    let mut stack = vec![from.to_string()];
    let mut seen = BTreeSet::new();
    while let Some(a) = stack.pop() {
        if a == to {
            return true;
        }
        if !seen.insert(a.clone()) {
            continue;
        }
        for (x, y) in edges {
            if *x == a {
                stack.push(y.clone());
            }
        }
    }
    false
}

/// An element of the unrolled structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    /// The interface cell of the top block.
    Top,
    /// Variable `var` (index into the block's list) of block `block`.
    Var { block: usize, var: usize },
}

/// The `n`-block structure unrolled into a poset, in sampling order:
/// the top interface first, then block `n−1` down to block 0, each in
/// variable order.
#[derive(Clone, Debug)]
pub struct Layout {
    n: usize,
    elements: Vec<Element>,
    poset: Poset,
    cells: Option<Vec<Cell>>,
    bottom: usize,
}

impl Layout {
    fn new(spec: &BlockSpec, n: usize) -> Self {
        let m = spec.vars.len();
        let chain = spec.chain_index();
        let mut elements = vec![Element::Top];
        for k in (0..n).rev() {
            for j in 0..m {
                elements.push(Element::Var { block: k, var: j });
            }
        }
        let index_of = |k: usize, j: usize| 1 + (n - 1 - k) * m + j;
        // Interface of block k is the top for k = n − 1, else the chain variable of block k + 1.
        let interface_of = |k: usize| {
            if k + 1 == n {
                0
            } else {
                index_of(k + 1, chain)
            }
        };
        let resolve = |k: usize, b: &Bound| -> Option<usize> {
            match b {
                Bound::Var(name) if name == &spec.interface => Some(interface_of(k)),
                Bound::Var(name) => spec.var_index(name).map(|i| index_of(k, i)),
                _ => None,
            }
        };
        let mut relations = Vec::new();
        for k in 0..n {
            for (j, v) in spec.vars.iter().enumerate() {
                let me = index_of(k, j);
                if let Some(lo) = resolve(k, &v.lower) {
                    relations.push((lo, me));
                }
                if let Some(hi) = resolve(k, &v.upper) {
                    relations.push((me, hi));
                }
            }
        }
        let poset = Poset::new(elements.len(), relations).expect("block relations are acyclic");

        let cells = spec.geometry.as_ref().map(|g| {
            let at = |k: i64, name: &str| {
                let [r, c] = g.cells[name];
                Cell::new(r + k as i32 * g.row_period, c)
            };
            elements
                .iter()
                .map(|e| match e {
                    Element::Top => at(n as i64 - 1, &spec.interface),
                    Element::Var { block, var } => at(*block as i64, &spec.vars[*var].name),
                })
                .collect()
        });
        let bottom = if n == 0 { 0 } else { index_of(0, chain) };
        Layout {
            n,
            elements,
            poset,
            cells,
            bottom,
        }
    }

    pub fn blocks(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Order relations implied by the block bounds.
    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    /// Cell of each element, when the block has a geometry.
    pub fn cells(&self) -> Option<&[Cell]> {
        self.cells.as_deref()
    }

    /// The chain variable of block 0 (the bottom cell); the top cell when `n = 0`.
    pub fn bottom(&self) -> usize {
        self.bottom
    }
}
