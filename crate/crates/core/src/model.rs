//! The CP-net data model.
//!
//! A [`CpNet`] is always structurally valid: every variable has a non-empty
//! domain, every preference table has exactly one strict linear order per
//! assignment to its parents, and parent lists are stored sorted by variable
//! index. Unchecked input is described with a [`NetSpec`], which can be
//! validated (collecting every violation) and then built.
//!
//! Variables and values are dense indices internally. Names are kept for
//! diagnostics and serialization only.

use std::collections::{BTreeMap, BinaryHeap};
use std::cmp::Reverse;
use std::fmt;

use crate::error::{Error, Result};
use crate::radix::MixedRadix;

/// Default cap on the number of rows of a single preference table.
pub const DEFAULT_MAX_TABLE_ROWS: usize = 4096;
/// Default cap on the number of outcomes an exhaustive search may visit.
pub const DEFAULT_MAX_OUTCOMES: u128 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

impl VarId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for VarId {
    fn from(i: usize) -> Self {
        VarId(i)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Size guardrails for the exponential parts of the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_table_rows: usize,
    pub max_outcomes: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_table_rows: DEFAULT_MAX_TABLE_ROWS,
            max_outcomes: DEFAULT_MAX_OUTCOMES,
        }
    }
}

/// `[A-Za-z_][A-Za-z0-9_]*`
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `[A-Za-z0-9_]+`
pub fn is_value_token(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// The values of a variable in declaration order. The order carries no
/// preference meaning.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Domain {
    values: Vec<String>,
}

impl Domain {
    pub fn new<S: Into<String>>(values: impl IntoIterator<Item = S>) -> Self {
        Domain {
            values: values.into_iter().map(Into::into).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, i: usize) -> &str {
        &self.values[i]
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.values.iter().position(|v| v == token)
    }

    fn without(&self, removed: usize) -> Domain {
        let mut values = self.values.clone();
        values.remove(removed);
        Domain { values }
    }
}

/// A strict linear order over `0..n`, most preferred first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TotalOrder {
    ranking: Vec<usize>,
    rank: Vec<usize>,
}

impl TotalOrder {
    /// Returns `None` unless `ranking` is a permutation of `0..ranking.len()`.
    pub fn new(ranking: Vec<usize>) -> Option<Self> {
        let n = ranking.len();
        if n == 0 {
            return None;
        }
        let mut rank = vec![usize::MAX; n];
        for (pos, &v) in ranking.iter().enumerate() {
            if v >= n || rank[v] != usize::MAX {
                return None;
            }
            rank[v] = pos;
        }
        Some(TotalOrder { ranking, rank })
    }

    /// The order `0 ≻ 1 ≻ … ≻ n-1`.
    pub fn identity(n: usize) -> Self {
        TotalOrder::new((0..n).collect()).expect("n > 0")
    }

    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    pub fn len(&self) -> usize {
        self.ranking.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The most preferred value.
    pub fn top(&self) -> usize {
        self.ranking[0]
    }

    /// Position of `v` in the ranking; 0 is best.
    pub fn rank_of(&self, v: usize) -> usize {
        self.rank[v]
    }

    /// `a ≻ b`
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        self.rank[a] < self.rank[b]
    }

    /// `a ⪰ b`, i.e. `a ≻ b` or `a = b`.
    pub fn weakly_prefers(&self, a: usize, b: usize) -> bool {
        a == b || self.prefers(a, b)
    }

    pub fn reversed(&self) -> TotalOrder {
        TotalOrder::new(self.ranking.iter().rev().copied().collect()).expect("permutation")
    }

    /// The restriction of the order to the values other than `removed`,
    /// renumbered so that values above `removed` shift down by one.
    pub fn without(&self, removed: usize) -> TotalOrder {
        let ranking = self
            .ranking
            .iter()
            .filter(|&&v| v != removed)
            .map(|&v| if v > removed { v - 1 } else { v })
            .collect();
        TotalOrder::new(ranking).expect("restriction of a permutation")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub domain: Domain,
}

/// Conditional preference table of one variable, stored densely: one row per
/// assignment to the parents, indexed by the mixed-radix code of that
/// assignment (parent-list order, first parent most significant).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PreferenceTable {
    parents: Vec<VarId>,
    keys: MixedRadix,
    rows: Vec<TotalOrder>,
}

impl PreferenceTable {
    pub(crate) fn from_parts(parents: Vec<VarId>, keys: MixedRadix, rows: Vec<TotalOrder>) -> Self {
        debug_assert_eq!(keys.len(), Some(rows.len()));
        debug_assert!(parents.windows(2).all(|w| w[0] < w[1]));
        PreferenceTable { parents, keys, rows }
    }

    pub fn parents(&self) -> &[VarId] {
        &self.parents
    }

    pub fn key_space(&self) -> &MixedRadix {
        &self.keys
    }

    pub fn rows(&self) -> &[TotalOrder] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// The row for a parent assignment given in parent-list order.
    pub fn row(&self, key: &[usize]) -> &TotalOrder {
        &self.rows[self.keys.encode(key)]
    }

    pub fn row_index_for(&self, outcome: &Outcome) -> usize {
        self.keys
            .encode_selected(outcome.values(), self.parents.iter().map(|p| p.index()))
    }

    pub fn row_for(&self, outcome: &Outcome) -> &TotalOrder {
        &self.rows[self.row_index_for(outcome)]
    }

    /// Every `(parent assignment, row)` pair in key order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, &TotalOrder)> {
        self.keys.iter().zip(self.rows.iter())
    }
}

/// A complete assignment: one value index per variable, in variable order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Outcome(pub Vec<usize>);

impl Outcome {
    pub fn new(values: Vec<usize>) -> Self {
        Outcome(values)
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, x: VarId) -> usize {
        self.0[x.index()]
    }

    /// `(v, s₋ₓ)`: this outcome with `x` reassigned to `v`.
    pub fn with(&self, x: VarId, v: usize) -> Outcome {
        let mut values = self.0.clone();
        values[x.index()] = v;
        Outcome(values)
    }

    /// The values at `vars`, in the order given by `vars`.
    pub fn project(&self, vars: &[VarId]) -> Result<Vec<usize>> {
        vars.iter()
            .map(|x| {
                self.0
                    .get(x.index())
                    .copied()
                    .ok_or_else(|| Error::UnknownVariable(x.to_string()))
            })
            .collect()
    }
}

/// A CP-net whose structural invariants hold by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CpNet {
    variables: Vec<Variable>,
    tables: Vec<PreferenceTable>,
}

impl CpNet {
    /// Assembles a net from already-consistent parts.
    pub(crate) fn from_parts(variables: Vec<Variable>, tables: Vec<PreferenceTable>) -> Self {
        debug_assert_eq!(variables.len(), tables.len());
        CpNet { variables, tables }
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn var_ids(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.variables.len()).map(VarId)
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, x: VarId) -> &Variable {
        &self.variables[x.index()]
    }

    pub fn name(&self, x: VarId) -> &str {
        &self.variables[x.index()].name
    }

    pub fn domain(&self, x: VarId) -> &Domain {
        &self.variables[x.index()].domain
    }

    pub fn value_name(&self, x: VarId, v: usize) -> &str {
        self.domain(x).value(v)
    }

    pub fn table(&self, x: VarId) -> &PreferenceTable {
        &self.tables[x.index()]
    }

    pub fn tables(&self) -> &[PreferenceTable] {
        &self.tables
    }

    pub fn parents(&self, x: VarId) -> &[VarId] {
        self.tables[x.index()].parents()
    }

    pub fn children(&self, x: VarId) -> Vec<VarId> {
        self.var_ids()
            .filter(|&c| self.parents(c).contains(&x))
            .collect()
    }

    pub fn var_by_name(&self, name: &str) -> Result<VarId> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .map(VarId)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn value_by_name(&self, x: VarId, token: &str) -> Result<usize> {
        self.domain(x).index_of(token).ok_or_else(|| Error::UnknownValue {
            variable: self.name(x).to_string(),
            value: token.to_string(),
        })
    }

    /// The order on `x`'s domain selected by the parent coordinates of
    /// `outcome`.
    pub fn lookup_order(&self, x: VarId, outcome: &Outcome) -> &TotalOrder {
        self.tables[x.index()].row_for(outcome)
    }

    /// The mixed-radix space of all outcomes (variable 0 most significant).
    pub fn outcome_space(&self) -> MixedRadix {
        MixedRadix::new(self.variables.iter().map(|v| v.domain.len()).collect())
    }

    pub fn outcome_count(&self) -> u128 {
        self.outcome_space().size()
    }

    pub fn check_outcome_count(&self, limit: u128) -> Result<usize> {
        let count = self.outcome_count();
        if count > limit {
            return Err(Error::SizeLimit { what: "outcome space", count, limit });
        }
        usize::try_from(count).map_err(|_| Error::SizeLimit { what: "outcome space", count, limit })
    }

    /// All outcomes in ascending mixed-radix order.
    pub fn outcomes(&self) -> impl Iterator<Item = Outcome> {
        let space = self.outcome_space();
        let n = space.len().unwrap_or(usize::MAX);
        (0..n).map(move |code| Outcome(space.decode(code)))
    }

    pub fn check_outcome(&self, outcome: &Outcome) -> Result<()> {
        if outcome.len() != self.len() {
            return Err(Error::OutcomeArity { expected: self.len(), got: outcome.len() });
        }
        for x in self.var_ids() {
            if outcome.get(x) >= self.domain(x).len() {
                return Err(Error::UnknownValue {
                    variable: self.name(x).to_string(),
                    value: format!("#{}", outcome.get(x)),
                });
            }
        }
        Ok(())
    }

    /// Value names of an outcome, in variable order.
    pub fn outcome_names(&self, outcome: &Outcome) -> Vec<String> {
        self.var_ids()
            .map(|x| self.value_name(x, outcome.get(x)).to_string())
            .collect()
    }

    /// `A=a B=b ...`
    pub fn format_assignment(&self, outcome: &Outcome) -> String {
        self.var_ids()
            .map(|x| format!("{}={}", self.name(x), self.value_name(x, outcome.get(x))))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// The outcome with the given value names, in variable order.
    pub fn outcome_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Outcome> {
        if names.len() != self.len() {
            return Err(Error::OutcomeArity { expected: self.len(), got: names.len() });
        }
        self.var_ids()
            .zip(names)
            .map(|(x, n)| self.value_by_name(x, n.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(Outcome)
    }

    pub fn dependency_graph(&self) -> DependencyGraph {
        let n = self.len();
        let mut children = vec![Vec::new(); n];
        for x in self.var_ids() {
            for &p in self.parents(x) {
                children[p.index()].push(x);
            }
        }
        DependencyGraph {
            parents: self.tables.iter().map(|t| t.parents.clone()).collect(),
            children,
        }
    }

    /// A topological order of the dependency graph (parents first, ties
    /// broken by lowest index), or `None` if the graph has a cycle.
    pub fn topological_order(&self) -> Option<Vec<VarId>> {
        self.dependency_graph().topological_order()
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Converts back to the unchecked representation.
    pub fn to_spec(&self) -> NetSpec {
        NetSpec {
            variables: self
                .variables
                .iter()
                .zip(&self.tables)
                .map(|(v, t)| VariableSpec {
                    name: v.name.clone(),
                    values: v.domain.values.clone(),
                    parents: t.parents.iter().map(|p| p.index()).collect(),
                    rows: t
                        .entries()
                        .map(|(key, order)| RowSpec { key, ranking: order.ranking.clone() })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Replaces the domain of `x` by its restriction without `removed` and
    /// every table accordingly: `x`'s rows lose the value, children of `x`
    /// lose the rows keyed by it.
    pub(crate) fn restrict_domain(&self, x: VarId, removed: usize) -> CpNet {
        let mut variables = self.variables.clone();
        variables[x.index()].domain = self.domain(x).without(removed);
        let tables = self
            .var_ids()
            .map(|c| {
                let old = self.table(c);
                let parents = old.parents.clone();
                let keys = MixedRadix::new(
                    parents.iter().map(|p| variables[p.index()].domain.len()).collect(),
                );
                let rows = keys
                    .iter()
                    .map(|key| {
                        let old_key: Vec<usize> = parents
                            .iter()
                            .zip(&key)
                            .map(|(&p, &v)| if p == x && v >= removed { v + 1 } else { v })
                            .collect();
                        let row = old.row(&old_key);
                        if c == x {
                            row.without(removed)
                        } else {
                            row.clone()
                        }
                    })
                    .collect();
                PreferenceTable::from_parts(parents, keys, rows)
            })
            .collect();
        CpNet { variables, tables }
    }

    pub(crate) fn with_table(&self, x: VarId, table: PreferenceTable) -> CpNet {
        let mut tables = self.tables.clone();
        tables[x.index()] = table;
        CpNet { variables: self.variables.clone(), tables }
    }
}

/// Directed graph with an edge `p → x` for every parent `p` of `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyGraph {
    parents: Vec<Vec<VarId>>,
    children: Vec<Vec<VarId>>,
}

impl DependencyGraph {
    pub fn node_count(&self) -> usize {
        self.parents.len()
    }

    pub fn parents(&self, x: VarId) -> &[VarId] {
        &self.parents[x.index()]
    }

    pub fn children(&self, x: VarId) -> &[VarId] {
        &self.children[x.index()]
    }

    /// All edges `(from, to)`, sorted.
    pub fn edges(&self) -> Vec<(VarId, VarId)> {
        let mut edges: Vec<_> = self
            .parents
            .iter()
            .enumerate()
            .flat_map(|(x, ps)| ps.iter().map(move |&p| (p, VarId(x))))
            .collect();
        edges.sort();
        edges
    }

    /// Kahn's algorithm with a min-heap, so ties go to the lowest index.
    pub fn topological_order(&self) -> Option<Vec<VarId>> {
        let n = self.node_count();
        let mut indegree: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<VarId>> = (0..n)
            .filter(|&x| indegree[x] == 0)
            .map(|x| Reverse(VarId(x)))
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(x)) = ready.pop() {
            order.push(x);
            for &c in &self.children[x.index()] {
                indegree[c.index()] -= 1;
                if indegree[c.index()] == 0 {
                    ready.push(Reverse(c));
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}

// ---------------------------------------------------------------------------
// Unchecked input and validation
// ---------------------------------------------------------------------------

/// A possibly-invalid CP-net description, as produced by a parser.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NetSpec {
    pub variables: Vec<VariableSpec>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VariableSpec {
    pub name: String,
    pub values: Vec<String>,
    /// Parent variable indices; any order.
    pub parents: Vec<usize>,
    pub rows: Vec<RowSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSpec {
    /// One value index per parent, in the order of [`VariableSpec::parents`].
    pub key: Vec<usize>,
    /// Value indices, most preferred first.
    pub ranking: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    MissingRow,
    DuplicateRow,
    NonPermutation,
    BadParent,
    DuplicateName,
    BadName,
    EmptyDomain,
    DuplicateValue,
    BadRowKey,
    TableTooLarge,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::MissingRow => "missing-row",
            ViolationKind::DuplicateRow => "duplicate-row",
            ViolationKind::NonPermutation => "non-permutation",
            ViolationKind::BadParent => "bad-parent",
            ViolationKind::DuplicateName => "duplicate-name",
            ViolationKind::BadName => "bad-name",
            ViolationKind::EmptyDomain => "empty-domain",
            ViolationKind::DuplicateValue => "duplicate-value",
            ViolationKind::BadRowKey => "bad-row-key",
            ViolationKind::TableTooLarge => "table-too-large",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Index of the offending variable in the spec.
    pub variable: Option<usize>,
    /// Index into the variable's `rows`, when a specific row is at fault.
    pub row: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Violation> {
        self.violations.iter()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl NetSpec {
    pub fn validate(&self) -> ValidationReport {
        self.validate_with(&Limits::default())
    }

    /// Collects every violated invariant; an empty report means
    /// [`NetSpec::build_with`] succeeds.
    pub fn validate_with(&self, limits: &Limits) -> ValidationReport {
        let mut out = Vec::new();
        let mut push = |kind, variable: Option<usize>, row: Option<usize>, message: String| {
            out.push(Violation { kind, variable, row, message })
        };
        let n = self.variables.len();

        let mut seen_names: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, var) in self.variables.iter().enumerate() {
            if !is_identifier(&var.name) {
                push(ViolationKind::BadName, Some(i), None, format!("`{}` is not a valid variable name", var.name));
            }
            if let Some(&first) = seen_names.get(var.name.as_str()) {
                push(
                    ViolationKind::DuplicateName,
                    Some(i),
                    None,
                    format!("variable `{}` declared twice (first as variable {})", var.name, first),
                );
            } else {
                seen_names.insert(&var.name, i);
            }
            if var.values.is_empty() {
                push(ViolationKind::EmptyDomain, Some(i), None, format!("`{}` has an empty domain", var.name));
            }
            let mut seen_values = BTreeMap::new();
            for v in &var.values {
                if !is_value_token(v) {
                    push(ViolationKind::BadName, Some(i), None, format!("`{}` is not a valid value of `{}`", v, var.name));
                }
                if seen_values.insert(v.as_str(), ()).is_some() {
                    push(ViolationKind::DuplicateValue, Some(i), None, format!("`{}` listed twice in the domain of `{}`", v, var.name));
                }
            }
        }

        for (i, var) in self.variables.iter().enumerate() {
            let mut parents_ok = true;
            let mut seen = vec![false; n];
            for &p in &var.parents {
                if p >= n {
                    push(ViolationKind::BadParent, Some(i), None, format!("`{}` has an undeclared parent #{p}", var.name));
                    parents_ok = false;
                } else if p == i {
                    push(ViolationKind::BadParent, Some(i), None, format!("`{}` lists itself as a parent", var.name));
                    parents_ok = false;
                } else if seen[p] {
                    push(
                        ViolationKind::BadParent,
                        Some(i),
                        None,
                        format!("`{}` lists parent `{}` twice", var.name, self.variables[p].name),
                    );
                    parents_ok = false;
                } else {
                    seen[p] = true;
                }
            }
            if !parents_ok {
                continue;
            }
            let radices: Vec<usize> = var.parents.iter().map(|&p| self.variables[p].values.len()).collect();
            if radices.contains(&0) {
                // the parent's own empty-domain violation covers this
                continue;
            }
            let keys = MixedRadix::new(radices);
            let count = keys.size();
            if count > limits.max_table_rows as u128 {
                push(
                    ViolationKind::TableTooLarge,
                    Some(i),
                    None,
                    format!("table of `{}` needs {count} rows, limit is {}", var.name, limits.max_table_rows),
                );
                continue;
            }
            let mut filled: Vec<Option<usize>> = vec![None; count as usize];
            for (r, row) in var.rows.iter().enumerate() {
                let key_ok = row.key.len() == var.parents.len()
                    && row.key.iter().zip(keys.radices()).all(|(&v, &rad)| v < rad);
                if !key_ok {
                    push(ViolationKind::BadRowKey, Some(i), Some(r), format!("row {} of `{}` has a malformed key", r + 1, var.name));
                    continue;
                }
                if TotalOrder::new(row.ranking.clone()).filter(|o| o.len() == var.values.len()).is_none() {
                    push(
                        ViolationKind::NonPermutation,
                        Some(i),
                        Some(r),
                        format!(
                            "row {} of `{}` does not rank every value exactly once",
                            self.describe_key(i, &row.key),
                            var.name
                        ),
                    );
                }
                let code = keys.encode(&row.key);
                if let Some(first) = filled[code] {
                    push(
                        ViolationKind::DuplicateRow,
                        Some(i),
                        Some(r),
                        format!(
                            "row {} of `{}` repeats row {}",
                            self.describe_key(i, &row.key),
                            var.name,
                            first + 1
                        ),
                    );
                } else {
                    filled[code] = Some(r);
                }
            }
            for (code, slot) in filled.iter().enumerate() {
                if slot.is_none() {
                    let key = keys.decode(code);
                    push(
                        ViolationKind::MissingRow,
                        Some(i),
                        None,
                        format!("`{}` has no row for {}", var.name, self.describe_key(i, &key)),
                    );
                }
            }
        }
        ValidationReport { violations: out }
    }

    fn describe_key(&self, var: usize, key: &[usize]) -> String {
        let parts: Vec<String> = self.variables[var]
            .parents
            .iter()
            .zip(key)
            .map(|(&p, &v)| {
                let pv = &self.variables[p];
                format!("{}={}", pv.name, pv.values.get(v).map(String::as_str).unwrap_or("?"))
            })
            .collect();
        format!("[{}]", parts.join(", "))
    }

    pub fn build(&self) -> Result<CpNet> {
        self.build_with(&Limits::default())
    }

    /// Validates and builds the dense net, sorting every parent list.
    pub fn build_with(&self, limits: &Limits) -> Result<CpNet> {
        let report = self.validate_with(limits);
        if !report.is_empty() {
            return Err(Error::Invalid(report));
        }
        let variables: Vec<Variable> = self
            .variables
            .iter()
            .map(|v| Variable { name: v.name.clone(), domain: Domain::new(v.values.clone()) })
            .collect();
        let tables = self
            .variables
            .iter()
            .map(|v| {
                // perm[k] = position in the spec's parent list of the k-th sorted parent
                let mut perm: Vec<usize> = (0..v.parents.len()).collect();
                perm.sort_by_key(|&k| v.parents[k]);
                let parents: Vec<VarId> = perm.iter().map(|&k| VarId(v.parents[k])).collect();
                let keys = MixedRadix::new(parents.iter().map(|p| variables[p.index()].domain.len()).collect());
                let mut rows: Vec<Option<TotalOrder>> = vec![None; keys.len().expect("checked")];
                for row in &v.rows {
                    let sorted_key: Vec<usize> = perm.iter().map(|&k| row.key[k]).collect();
                    rows[keys.encode(&sorted_key)] = TotalOrder::new(row.ranking.clone());
                }
                let rows = rows.into_iter().map(|r| r.expect("validated")).collect();
                PreferenceTable::from_parts(parents, keys, rows)
            })
            .collect();
        Ok(CpNet { variables, tables })
    }
}

/// Name-based construction, mostly for tests and small hand-written nets.
///
/// ```
/// use cpnet::model::NetBuilder;
/// let net = NetBuilder::new()
///     .variable("A", &["a", "abar"])
///     .variable("B", &["b", "bbar"])
///     .parents("B", &["A"])
///     .row("A", &[], &["a", "abar"])
///     .row("B", &["a"], &["b", "bbar"])
///     .row("B", &["abar"], &["bbar", "b"])
///     .build()
///     .unwrap();
/// assert_eq!(net.len(), 2);
/// ```
#[derive(Debug, Default, Clone)]
pub struct NetBuilder {
    spec: NetSpec,
    errors: Vec<String>,
}

impl NetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn index(&self, name: &str) -> Option<usize> {
        self.spec.variables.iter().position(|v| v.name == name)
    }

    pub fn variable(mut self, name: &str, values: &[&str]) -> Self {
        self.spec.variables.push(VariableSpec {
            name: name.to_string(),
            values: values.iter().map(|s| s.to_string()).collect(),
            parents: Vec::new(),
            rows: Vec::new(),
        });
        self
    }

    pub fn parents(mut self, name: &str, parents: &[&str]) -> Self {
        let ids: Option<Vec<usize>> = parents.iter().map(|p| self.index(p)).collect();
        match (self.index(name), ids) {
            (Some(i), Some(ids)) => self.spec.variables[i].parents = ids,
            _ => self.errors.push(format!("unknown variable in parents of `{name}`")),
        }
        self
    }

    /// Adds a row keyed by parent values (in the order given to
    /// [`NetBuilder::parents`]) ranking `order`, best first.
    pub fn row(mut self, name: &str, key: &[&str], order: &[&str]) -> Self {
        let Some(i) = self.index(name) else {
            self.errors.push(format!("unknown variable `{name}`"));
            return self;
        };
        let parents = self.spec.variables[i].parents.clone();
        let key: Option<Vec<usize>> = if key.len() == parents.len() {
            parents
                .iter()
                .zip(key)
                .map(|(&p, k)| self.spec.variables[p].values.iter().position(|v| v == k))
                .collect()
        } else {
            None
        };
        let ranking: Option<Vec<usize>> = order
            .iter()
            .map(|o| self.spec.variables[i].values.iter().position(|v| v == o))
            .collect();
        match (key, ranking) {
            (Some(key), Some(ranking)) => self.spec.variables[i].rows.push(RowSpec { key, ranking }),
            _ => self.errors.push(format!("bad row for `{name}`")),
        }
        self
    }

    pub fn spec(&self) -> &NetSpec {
        &self.spec
    }

    pub fn build(self) -> Result<CpNet> {
        if let Some(e) = self.errors.first() {
            return Err(Error::Malformed(e.clone()));
        }
        self.spec.build()
    }
}
