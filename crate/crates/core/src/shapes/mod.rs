//! Grid shapes with walls, the posets they induce, and the brute-force oracle.
//!
//! Coordinates: row 0 is the bottom row and columns grow to the right. Labels
//! must increase upward and rightward across every edge that is not a wall;
//! a wall drops the constraint entirely (a decrease is allowed, not forced).

pub mod families;
mod oracle;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use oracle::{count_linear_extensions, enumerate_fillings, MAX_ORACLE_ELEMENTS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub row: i32,
    pub col: i32,
}

impl Cell {
    pub const fn new(row: i32, col: i32) -> Self {
        Cell { row, col }
    }

    fn up(self) -> Cell {
        Cell::new(self.row + 1, self.col)
    }

    fn right(self) -> Cell {
        Cell::new(self.row, self.col + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WallDir {
    Up,
    Right,
}

/// The edge between `cell` and its neighbour in direction `dir`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wall {
    pub cell: Cell,
    pub dir: WallDir,
}

impl Wall {
    pub const fn up(row: i32, col: i32) -> Self {
        Wall {
            cell: Cell::new(row, col),
            dir: WallDir::Up,
        }
    }

    pub const fn right(row: i32, col: i32) -> Self {
        Wall {
            cell: Cell::new(row, col),
            dir: WallDir::Right,
        }
    }

    fn other(&self) -> Cell {
        match self.dir {
            WallDir::Up => self.cell.up(),
            WallDir::Right => self.cell.right(),
        }
    }
}

pub type WallSet = BTreeSet<Wall>;

/// A rectangular `rows × cols` grid, optionally extended by extra cells, with walls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeSpec {
    rows: usize,
    cols: usize,
    extra_cells: Vec<Cell>,
    walls: WallSet,
    cells: Vec<Cell>,
    index: BTreeMap<Cell, usize>,
}

impl ShapeSpec {
    pub fn new(
        rows: usize,
        cols: usize,
        extra_cells: Vec<Cell>,
        walls: impl IntoIterator<Item = Wall>,
    ) -> Result<Self> {
        if (rows == 0 || cols == 0) && extra_cells.is_empty() {
            return Err(Error::usage("shape has no cells"));
        }
        let mut set: BTreeSet<Cell> = (0..rows as i32)
            .flat_map(|r| (0..cols as i32).map(move |c| Cell::new(r, c)))
            .collect();
        set.extend(extra_cells.iter().copied());
        let cells: Vec<Cell> = set.into_iter().collect();
        let index: BTreeMap<Cell, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();

        let walls: WallSet = walls.into_iter().collect();
        for w in &walls {
            if !index.contains_key(&w.cell) || !index.contains_key(&w.other()) {
                return Err(Error::usage(format!(
                    "wall {:?} at ({}, {}) does not join two cells of the shape",
                    w.dir, w.cell.row, w.cell.col
                )));
            }
        }

        let shape = ShapeSpec {
            rows,
            cols,
            extra_cells,
            walls,
            cells,
            index,
        };
        if !shape.is_connected() {
            return Err(Error::usage("cells do not form a connected region"));
        }
        Ok(shape)
    }

    pub fn rectangle(rows: usize, cols: usize) -> Result<Self> {
        ShapeSpec::new(rows, cols, Vec::new(), [])
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.cells.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            let c = self.cells[i];
            for n in [
                Cell::new(c.row + 1, c.col),
                Cell::new(c.row - 1, c.col),
                Cell::new(c.row, c.col + 1),
                Cell::new(c.row, c.col - 1),
            ] {
                if let Some(&j) = self.index.get(&n) {
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn extra_cells(&self) -> &[Cell] {
        &self.extra_cells
    }

    pub fn walls(&self) -> &WallSet {
        &self.walls
    }

    /// Cells in canonical order: by row, then column.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn index_of(&self, cell: Cell) -> Option<usize> {
        self.index.get(&cell).copied()
    }

    pub fn has_wall(&self, cell: Cell, dir: WallDir) -> bool {
        self.walls.contains(&Wall { cell, dir })
    }

    /// Every constrained adjacency as `(smaller, larger)` cell indices.
    pub fn constraints(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, &c) in self.cells.iter().enumerate() {
            for (dir, n) in [(WallDir::Right, c.right()), (WallDir::Up, c.up())] {
                if let Some(j) = self.index_of(n) {
                    if !self.has_wall(c, dir) {
                        out.push((i, j));
                    }
                }
            }
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ShapeJson = serde_json::from_str(text)?;
        raw.into_shape()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ShapeJson::from(self)).expect("shape serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct WallJson {
    cell: [i32; 2],
    dir: WallDir,
}

/// On-disk shape format consumed by the CLI.
#[derive(Serialize, Deserialize)]
struct ShapeJson {
    rows: usize,
    cols: usize,
    #[serde(default)]
    extra_cells: Vec<[i32; 2]>,
    #[serde(default)]
    walls: Vec<WallJson>,
}

impl ShapeJson {
    fn into_shape(self) -> Result<ShapeSpec> {
        let mut walls = WallSet::new();
        for w in self.walls {
            let wall = Wall {
                cell: Cell::new(w.cell[0], w.cell[1]),
                dir: w.dir,
            };
            if !walls.insert(wall) {
                return Err(Error::usage(format!(
                    "duplicate wall at ({}, {})",
                    w.cell[0], w.cell[1]
                )));
            }
        }
        ShapeSpec::new(
            self.rows,
            self.cols,
            self.extra_cells
                .into_iter()
                .map(|[r, c]| Cell::new(r, c))
                .collect(),
            walls,
        )
    }
}

impl From<&ShapeSpec> for ShapeJson {
    fn from(s: &ShapeSpec) -> Self {
        ShapeJson {
            rows: s.rows,
            cols: s.cols,
            extra_cells: s.extra_cells.iter().map(|c| [c.row, c.col]).collect(),
            walls: s
                .walls
                .iter()
                .map(|w| WallJson {
                    cell: [w.cell.row, w.cell.col],
                    dir: w.dir,
                })
                .collect(),
        }
    }
}

/// A finite poset given by cover relations `a < b` over elements `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    len: usize,
    relations: Vec<(usize, usize)>,
}

impl Poset {
    /// Fails if a relation is out of range or the relations contain a cycle.
    pub fn new(len: usize, relations: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(a, b)) = relations.iter().find(|&&(a, b)| a >= len || b >= len) {
            return Err(Error::usage(format!(
                "relation {a} < {b} outside 0..{len}"
            )));
        }
        let poset = Poset { len, relations };
        if poset.topological_order().is_none() {
            return Err(Error::usage("relations contain a cycle"));
        }
        Ok(poset)
    }

    pub fn antichain(len: usize) -> Self {
        Poset {
            len,
            relations: Vec::new(),
        }
    }

    pub fn chain(len: usize) -> Self {
        Poset {
            len,
            relations: (1..len).map(|i| (i - 1, i)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn relations(&self) -> &[(usize, usize)] {
        &self.relations
    }

    /// Direct predecessors of each element.
    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len];
        for &(a, b) in &self.relations {
            pred[b].push(a);
        }
        pred
    }

    fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.len];
        let mut succ = vec![Vec::new(); self.len];
        for &(a, b) in &self.relations {
            indeg[b] += 1;
            succ[a].push(b);
        }
        let mut queue: VecDeque<usize> = (0..self.len).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(self.len);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for &j in &succ[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push_back(j);
                }
            }
        }
        (order.len() == self.len).then_some(order)
    }
}

/// One cover relation per non-wall adjacent pair, oriented left→right and bottom→top.
pub fn build_poset(shape: &ShapeSpec) -> Poset {
    Poset {
        len: shape.len(),
        relations: shape.constraints(),
    }
}

/// A bijective labelling of the elements (cells) with `1..=N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Filling {
    labels: Vec<u32>,
}

impl Filling {
    /// `labels[i]` is the label of element `i`; must be a permutation of `1..=N`.
    pub fn new(labels: Vec<u32>) -> Result<Self> {
        let n = labels.len();
        let mut seen = vec![false; n];
        for &l in &labels {
            let i = l as usize;
            if i == 0 || i > n || seen[i - 1] {
                return Err(Error::usage(format!(
                    "labels are not a permutation of 1..={n}"
                )));
            }
            seen[i - 1] = true;
        }
        Ok(Filling { labels })
    }

    /// Labels elements by their position in `order` (the element receiving label 1 first).
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let mut labels = vec![0u32; order.len()];
        for (pos, &e) in order.iter().enumerate() {
            if e >= order.len() || labels[e] != 0 {
                return Err(Error::usage("order is not a permutation"));
            }
            labels[e] = pos as u32 + 1;
        }
        Ok(Filling { labels })
    }

    /// Ranks real values: the smallest gets label 1. Ties are a usage error.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        if order.windows(2).any(|w| values[w[0]] == values[w[1]]) {
            return Err(Error::usage("tied values cannot be ranked"));
        }
        Filling::from_order(&order)
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, element: usize) -> u32 {
        self.labels[element]
    }

    /// Elements in increasing label order.
    pub fn order(&self) -> Vec<usize> {
        let mut order = vec![0usize; self.labels.len()];
        for (e, &l) in self.labels.iter().enumerate() {
            order[l as usize - 1] = e;
        }
        order
    }

    pub fn satisfies(&self, poset: &Poset) -> bool {
        self.labels.len() == poset.len()
            && poset
                .relations()
                .iter()
                .all(|&(a, b)| self.labels[a] < self.labels[b])
    }
}

/// True iff every non-wall adjacency increases upward and rightward.
pub fn is_valid_filling(shape: &ShapeSpec, filling: &Filling) -> Result<bool> {
    if filling.len() != shape.len() {
        return Err(Error::usage(format!(
            "filling has {} labels for {} cells",
            filling.len(),
            shape.len()
        )));
    }
    Ok(shape
        .constraints()
        .iter()
        .all(|&(a, b)| filling.label(a) < filling.label(b)))
}

/// ASCII rendering, top row first. `|` marks a right wall and `=` a wall above a cell.
pub fn render_ascii(shape: &ShapeSpec, filling: &Filling) -> String {
    let width = shape.len().to_string().len();
    let (min_row, max_row) = shape
        .cells()
        .iter()
        .fold((i32::MAX, i32::MIN), |(lo, hi), c| (lo.min(c.row), hi.max(c.row)));
    let min_col = shape.cells().iter().map(|c| c.col).min().unwrap_or(0);
    let max_col = shape.cells().iter().map(|c| c.col).max().unwrap_or(0);
    let mut out = String::new();
    for row in (min_row..=max_row).rev() {
        let mut line = String::new();
        let mut under = String::new();
        for col in min_col..=max_col {
            let cell = Cell::new(row, col);
            match shape.index_of(cell) {
                Some(i) => {
                    line.push_str(&format!("{:>width$}", filling.label(i)));
                    line.push(if shape.has_wall(cell, WallDir::Right) { '|' } else { ' ' });
                    let below = Cell::new(row - 1, col);
                    let mark = if shape.has_wall(below, WallDir::Up) { '=' } else { ' ' };
                    under.push_str(&mark.to_string().repeat(width));
                    under.push(' ');
                }
                None => {
                    line.push_str(&" ".repeat(width + 1));
                    under.push_str(&" ".repeat(width + 1));
                }
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
        if !under.trim().is_empty() {
            out.push_str(under.trim_end());
            out.push('\n');
        }
    }
    out
}

impl fmt::Display for Filling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.labels.iter().map(u32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}
