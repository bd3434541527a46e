//! Compilation of a parsed model into a finite directed acyclic graph.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use bayes_core::{Distribution, Family};

use crate::ast::*;
use crate::data::{DataSet, DataValue};
use crate::error::{DslError, Result, Span};

pub type NodeId = usize;

/// Expression with identifiers resolved to node ids.
#[derive(Clone, Debug, PartialEq)]
pub enum CExpr {
    Const(f64),
    Node(NodeId),
    Neg(Box<CExpr>),
    Bin(BinOp, Box<CExpr>, Box<CExpr>),
    Call(Func, Vec<CExpr>),
}

impl CExpr {
    pub fn eval(&self, values: &[f64]) -> f64 {
        match self {
            CExpr::Const(v) => *v,
            CExpr::Node(id) => values[*id],
            CExpr::Neg(e) => -e.eval(values),
            CExpr::Bin(op, a, b) => op.apply(a.eval(values), b.eval(values)),
            CExpr::Call(f, args) => {
                let mut buf = [0.0; 2];
                for (slot, a) in buf.iter_mut().zip(args) {
                    *slot = a.eval(values);
                }
                f.apply(&buf[..args.len()])
            }
        }
    }

    fn collect_nodes(&self, out: &mut Vec<NodeId>) {
        match self {
            CExpr::Const(_) => {}
            CExpr::Node(id) => out.push(*id),
            CExpr::Neg(e) => e.collect_nodes(out),
            CExpr::Bin(_, a, b) => {
                a.collect_nodes(out);
                b.collect_nodes(out);
            }
            CExpr::Call(_, args) => args.iter().for_each(|a| a.collect_nodes(out)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind {
    /// Constant supplied as data and referenced by the model.
    Data(f64),
    Stochastic { dist: DistKind, args: Vec<CExpr>, observed: Option<f64> },
    Deterministic(CExpr),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub key: String,
    pub kind: NodeKind,
    pub span: Option<Span>,
    pub parents: Vec<NodeId>,
}

impl Node {
    pub fn is_unknown(&self) -> bool {
        matches!(self.kind, NodeKind::Stochastic { observed: None, .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelGraph {
    nodes: Vec<Node>,
    /// Topological order: every node after its parents.
    order: Vec<NodeId>,
    children: Vec<Vec<NodeId>>,
    unknowns: Vec<NodeId>,
    /// For each node: stochastic nodes whose density depends on it directly or
    /// through deterministic nodes, the node itself first when stochastic.
    blanket: Vec<Vec<NodeId>>,
    /// For each node: deterministic descendants reached without crossing a
    /// stochastic node, in topological order.
    det_desc: Vec<Vec<NodeId>>,
}

pub(crate) fn family(dist: DistKind, p: [f64; 2]) -> Option<Distribution> {
    let fam = match dist {
        DistKind::Beta => Family::Beta { a: p[0], b: p[1] },
        DistKind::Norm => Family::Normal { mean: p[0], sd: p[1] },
        DistKind::Bin => {
            if !(p[1] >= 0.0 && p[1].fract() == 0.0 && p[1] < 1e15) {
                return None;
            }
            Family::Binomial { trials: p[1] as u64, prob: p[0] }
        }
        DistKind::Gamma => Family::Gamma { shape: p[0], rate: p[1] },
        DistKind::Unif => Family::Uniform { lo: p[0], hi: p[1] },
    };
    Distribution::new(fam).ok()
}

impl ModelGraph {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn node_id(&self, key: &str) -> Option<NodeId> {
        self.nodes.iter().position(|n| n.key == key)
    }

    pub fn unknowns(&self) -> &[NodeId] {
        &self.unknowns
    }

    pub fn unknown_names(&self) -> Vec<String> {
        self.unknowns.iter().map(|&u| self.nodes[u].key.clone()).collect()
    }

    pub fn observed(&self) -> Vec<NodeId> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| matches!(n.kind, NodeKind::Stochastic { observed: Some(_), .. }))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.children[id]
    }

    pub fn topological_order(&self) -> &[NodeId] {
        &self.order
    }

    /// The node itself (when stochastic) and the stochastic nodes whose density depends on it.
    pub fn markov_blanket(&self, id: NodeId) -> &[NodeId] {
        &self.blanket[id]
    }

    pub(crate) fn det_desc(&self, id: NodeId) -> &[NodeId] {
        &self.det_desc[id]
    }

    /// Distribution of a stochastic node given current values; `None` when
    /// the parameters are invalid.
    pub fn distribution(&self, id: NodeId, values: &[f64]) -> Option<Distribution> {
        match &self.nodes[id].kind {
            NodeKind::Stochastic { dist, args, .. } => family(*dist, [args[0].eval(values), args[1].eval(values)]),
            _ => None,
        }
    }

    /// Log density of a stochastic node at its current value; `-inf` for
    /// invalid parameters or values outside the support.
    pub fn node_log_density(&self, id: NodeId, values: &[f64]) -> f64 {
        match self.distribution(id, values) {
            Some(d) => {
                let v = d.log_density(values[id]);
                if v.is_nan() {
                    f64::NEG_INFINITY
                } else {
                    v
                }
            }
            None => f64::NEG_INFINITY,
        }
    }

    /// Recomputes every deterministic node from its parents.
    pub fn fill_deterministic(&self, values: &mut [f64]) {
        for &id in &self.order {
            if let NodeKind::Deterministic(e) = &self.nodes[id].kind {
                values[id] = e.eval(values);
            }
        }
    }

    pub(crate) fn update_descendants(&self, id: NodeId, values: &mut [f64]) {
        for &d in &self.det_desc[id] {
            if let NodeKind::Deterministic(e) = &self.nodes[d].kind {
                values[d] = e.eval(values);
            }
        }
    }

    /// Sum of log densities over every stochastic node, observed or not.
    pub fn log_joint(&self, values: &[f64]) -> f64 {
        let mut v = values.to_vec();
        self.fill_deterministic(&mut v);
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| matches!(n.kind, NodeKind::Stochastic { .. }))
            .map(|(i, _)| self.node_log_density(i, &v))
            .sum()
    }

    /// Log prior of `node` plus the log densities of the stochastic nodes that
    /// depend on it. Deterministic entries of `values` are recomputed first.
    pub fn log_full_conditional(&self, node: NodeId, values: &[f64]) -> f64 {
        let mut v = values.to_vec();
        self.fill_deterministic(&mut v);
        self.blanket_log_density(node, &v)
    }

    pub(crate) fn blanket_log_density(&self, node: NodeId, values: &[f64]) -> f64 {
        let mut total = 0.0;
        for &s in &self.blanket[node] {
            total += self.node_log_density(s, values);
            if total == f64::NEG_INFINITY {
                break;
            }
        }
        total
    }

    /// Data and observed values in place, unknowns at their prior medians (or
    /// at `overrides`), deterministic nodes computed.
    pub fn initial_values(&self, overrides: &BTreeMap<String, f64>) -> Result<Vec<f64>> {
        for key in overrides.keys() {
            match self.node_id(key) {
                Some(id) if self.nodes[id].is_unknown() => {}
                _ => return Err(DslError::Compile { span: None, message: format!("no unknown named `{key}` to initialise") }),
            }
        }
        let mut values = vec![f64::NAN; self.nodes.len()];
        for &id in &self.order {
            let node = &self.nodes[id];
            values[id] = match &node.kind {
                NodeKind::Data(v) => *v,
                NodeKind::Deterministic(e) => e.eval(&values),
                NodeKind::Stochastic { observed: Some(v), .. } => *v,
                NodeKind::Stochastic { dist, observed: None, .. } => match overrides.get(&node.key) {
                    Some(v) => *v,
                    None => {
                        let d = self.distribution(id, &values).ok_or_else(|| DslError::Compile {
                            span: node.span,
                            message: format!("cannot initialise `{}`: invalid {} parameters", node.key, dist.name()),
                        })?;
                        d.median()
                    }
                },
            };
        }
        Ok(values)
    }
}

/// One unrolled definition before name resolution.
struct Pending<'a> {
    key: String,
    span: Span,
    stmt: &'a StmtKind,
    env: Vec<(String, i64)>,
}

/// Unrolls loops, resolves identifiers against definitions and data, and
/// checks single definition and acyclicity.
pub fn compile(ast: &ModelAst, data: &DataSet) -> Result<ModelGraph> {
    let mut pending = Vec::new();
    let mut env = Vec::new();
    unroll(&ast.stmts, data, &mut env, &mut pending)?;

    let mut defined: HashMap<String, NodeId> = HashMap::new();
    let mut indexed_names: BTreeSet<String> = BTreeSet::new();
    for (id, p) in pending.iter().enumerate() {
        if let Some(prev) = defined.insert(p.key.clone(), id) {
            return Err(DslError::compile(
                p.span,
                format!("`{}` is defined more than once (first at {})", p.key, pending[prev].span),
            ));
        }
        if let StmtKind::Stochastic { target, .. } | StmtKind::Deterministic { target, .. } = p.stmt {
            if target.index.is_some() {
                indexed_names.insert(target.name.clone());
            }
        }
    }

    let mut r = Resolver { data, defined: &defined, indexed: &indexed_names, extra: Vec::new(), extra_ids: HashMap::new(), base: pending.len() };
    let mut nodes = Vec::with_capacity(pending.len());
    for p in &pending {
        let kind = match p.stmt {
            StmtKind::Stochastic { dist, .. } => {
                let args = dist.args.iter().map(|a| r.resolve(a, &p.env)).collect::<Result<Vec<_>>>()?;
                let observed = observed_value(data, &p.key, p.span)?;
                NodeKind::Stochastic { dist: dist.kind, args, observed }
            }
            StmtKind::Deterministic { expr, .. } => {
                if observed_value(data, &p.key, p.span)?.is_some() {
                    return Err(DslError::compile(
                        p.span,
                        format!("`{}` is supplied as data but defined with `<-`", p.key),
                    ));
                }
                NodeKind::Deterministic(r.resolve(expr, &p.env)?)
            }
            StmtKind::Loop { .. } => unreachable!("loops are unrolled"),
        };
        nodes.push(Node { key: p.key.clone(), kind, span: Some(p.span), parents: Vec::new() });
    }
    for (key, v) in r.extra {
        nodes.push(Node { key, kind: NodeKind::Data(v), span: None, parents: Vec::new() });
    }
    for node in &mut nodes {
        let mut ps = Vec::new();
        match &node.kind {
            NodeKind::Data(_) => {}
            NodeKind::Stochastic { args, .. } => args.iter().for_each(|a| a.collect_nodes(&mut ps)),
            NodeKind::Deterministic(e) => e.collect_nodes(&mut ps),
        }
        ps.sort_unstable();
        ps.dedup();
        node.parents = ps;
    }

    let order = topological_order(&nodes)?;
    let mut children = vec![Vec::new(); nodes.len()];
    for (id, n) in nodes.iter().enumerate() {
        for &p in &n.parents {
            children[p].push(id);
        }
    }
    let position: Vec<usize> = {
        let mut pos = vec![0; nodes.len()];
        for (k, &id) in order.iter().enumerate() {
            pos[id] = k;
        }
        pos
    };
    let mut blanket = Vec::with_capacity(nodes.len());
    let mut det_desc = Vec::with_capacity(nodes.len());
    for id in 0..nodes.len() {
        let mut stoch = Vec::new();
        if matches!(nodes[id].kind, NodeKind::Stochastic { .. }) {
            stoch.push(id);
        }
        let mut dets = Vec::new();
        let mut seen = vec![false; nodes.len()];
        let mut stack: Vec<NodeId> = children[id].clone();
        while let Some(c) = stack.pop() {
            if std::mem::replace(&mut seen[c], true) {
                continue;
            }
            match nodes[c].kind {
                NodeKind::Deterministic(_) => {
                    dets.push(c);
                    stack.extend(children[c].iter().copied());
                }
                NodeKind::Stochastic { .. } => stoch.push(c),
                NodeKind::Data(_) => {}
            }
        }
        let skip = usize::from(stoch.first() == Some(&id));
        stoch[skip..].sort_unstable();
        dets.sort_by_key(|&d| position[d]);
        blanket.push(stoch);
        det_desc.push(dets);
    }
    let unknowns = (0..nodes.len()).filter(|&i| nodes[i].is_unknown()).collect();
    Ok(ModelGraph { nodes, order, children, unknowns, blanket, det_desc })
}

fn unroll<'a>(
    stmts: &'a [Stmt],
    data: &DataSet,
    env: &mut Vec<(String, i64)>,
    out: &mut Vec<Pending<'a>>,
) -> Result<()> {
    for s in stmts {
        match &s.kind {
            StmtKind::Loop { var, from, to, body } => {
                if env.iter().any(|(v, _)| v == var) {
                    return Err(DslError::compile(s.span, format!("loop variable `{var}` is already in use")));
                }
                if data.contains(var) {
                    return Err(DslError::compile(s.span, format!("loop variable `{var}` shadows a data name")));
                }
                let lo = bound_value(from, data, s.span)?;
                let hi = bound_value(to, data, s.span)?;
                for i in lo..=hi {
                    env.push((var.clone(), i));
                    unroll(body, data, env, out)?;
                    env.pop();
                }
            }
            StmtKind::Stochastic { target, .. } | StmtKind::Deterministic { target, .. } => {
                if env.iter().any(|(v, _)| *v == target.name) {
                    return Err(DslError::compile(target.span, format!("cannot assign to loop variable `{}`", target.name)));
                }
                let key = match &target.index {
                    None => target.name.clone(),
                    Some(e) => format!("{}[{}]", target.name, const_index(e, env, data)?),
                };
                out.push(Pending { key, span: s.span, stmt: &s.kind, env: env.clone() });
            }
        }
    }
    Ok(())
}

fn bound_value(b: &Bound, data: &DataSet, span: Span) -> Result<i64> {
    match b {
        Bound::Int(v) => Ok(*v as i64),
        Bound::Name(n) => {
            let v = data
                .get_scalar(n)
                .ok_or_else(|| DslError::compile(span, format!("loop bound `{n}` is missing from the data")))?;
            if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                Ok(v as i64)
            } else {
                Err(DslError::compile(span, format!("loop bound `{n}` = {v} is not a positive integer")))
            }
        }
    }
}

/// Evaluates an index from literals, loop variables and data scalars.
fn const_eval(e: &Expr, env: &[(String, i64)], data: &DataSet) -> Result<f64> {
    Ok(match &e.kind {
        ExprKind::Num(v) => *v,
        ExprKind::Var(n) => match env.iter().rev().find(|(v, _)| v == n) {
            Some((_, i)) => *i as f64,
            None => data
                .get_scalar(n)
                .ok_or_else(|| DslError::compile(e.span, format!("index uses `{n}`, which is neither a loop variable nor scalar data")))?,
        },
        ExprKind::Index(n, i) => {
            let k = const_index(i, env, data)?;
            data.get_element(n, k)
                .ok_or_else(|| DslError::compile(e.span, format!("index uses `{n}[{k}]`, which is not data")))?
        }
        ExprKind::Neg(a) => -const_eval(a, env, data)?,
        ExprKind::Binary(op, a, b) => op.apply(const_eval(a, env, data)?, const_eval(b, env, data)?),
        ExprKind::Call(f, args) => {
            let vals = args.iter().map(|a| const_eval(a, env, data)).collect::<Result<Vec<_>>>()?;
            f.apply(&vals)
        }
    })
}

fn const_index(e: &Expr, env: &[(String, i64)], data: &DataSet) -> Result<usize> {
    let v = const_eval(e, env, data)?;
    if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(DslError::compile(e.span, format!("index {v} is not a positive integer")))
    }
}

fn observed_value(data: &DataSet, key: &str, span: Span) -> Result<Option<f64>> {
    let Some((name, idx)) = split_key(key) else {
        return match data.get(key) {
            None => Ok(None),
            Some(DataValue::Scalar(v)) => Ok(Some(*v)),
            Some(DataValue::Array(a)) if a.len() == 1 => Ok(Some(a[0])),
            Some(DataValue::Array(_)) => Err(DslError::compile(span, format!("`{key}` is an array in the data but a scalar in the model"))),
        };
    };
    match data.get(name) {
        None => Ok(None),
        Some(DataValue::Array(a)) => a.get(idx - 1).copied().map(Some).ok_or_else(|| {
            DslError::compile(span, format!("`{key}` is beyond the data array `{name}` (length {})", a.len()))
        }),
        Some(DataValue::Scalar(_)) => Err(DslError::compile(span, format!("`{name}` is scalar in the data but indexed in the model"))),
    }
}

fn split_key(key: &str) -> Option<(&str, usize)> {
    let open = key.find('[')?;
    Some((&key[..open], key[open + 1..key.len() - 1].parse().ok()?))
}

struct Resolver<'a> {
    data: &'a DataSet,
    defined: &'a HashMap<String, NodeId>,
    indexed: &'a BTreeSet<String>,
    extra: Vec<(String, f64)>,
    extra_ids: HashMap<String, NodeId>,
    base: usize,
}

impl Resolver<'_> {
    fn lookup(&mut self, key: &str, data_value: Option<f64>, span: Span, name: &str) -> Result<CExpr> {
        if let Some(&id) = self.defined.get(key) {
            return Ok(CExpr::Node(id));
        }
        if let Some(&id) = self.extra_ids.get(key) {
            return Ok(CExpr::Node(id));
        }
        match data_value {
            Some(v) => {
                let id = self.base + self.extra.len();
                self.extra.push((key.to_string(), v));
                self.extra_ids.insert(key.to_string(), id);
                Ok(CExpr::Node(id))
            }
            None if self.indexed.contains(name) && key == name => {
                Err(DslError::compile(span, format!("`{name}` is indexed; write `{name}[...]`")))
            }
            None => Err(DslError::compile(span, format!("undefined identifier `{key}`"))),
        }
    }

    fn resolve(&mut self, e: &Expr, env: &[(String, i64)]) -> Result<CExpr> {
        Ok(match &e.kind {
            ExprKind::Num(v) => CExpr::Const(*v),
            ExprKind::Var(n) => {
                if let Some((_, i)) = env.iter().rev().find(|(v, _)| v == n) {
                    return Ok(CExpr::Const(*i as f64));
                }
                if matches!(self.data.get(n), Some(DataValue::Array(a)) if a.len() != 1) && !self.defined.contains_key(n) {
                    return Err(DslError::compile(e.span, format!("`{n}` is an array; write `{n}[...]`")));
                }
                let v = self.data.get_scalar(n);
                self.lookup(n, v, e.span, n)?
            }
            ExprKind::Index(n, i) => {
                let k = const_index(i, env, self.data)?;
                let key = format!("{n}[{k}]");
                let v = self.data.get_element(n, k);
                self.lookup(&key, v, e.span, n)?
            }
            ExprKind::Neg(a) => CExpr::Neg(Box::new(self.resolve(a, env)?)),
            ExprKind::Binary(op, a, b) => CExpr::Bin(*op, Box::new(self.resolve(a, env)?), Box::new(self.resolve(b, env)?)),
            ExprKind::Call(f, args) => CExpr::Call(*f, args.iter().map(|a| self.resolve(a, env)).collect::<Result<_>>()?),
        })
    }
}

fn topological_order(nodes: &[Node]) -> Result<Vec<NodeId>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut mark = vec![Mark::New; nodes.len()];
    let mut order = Vec::with_capacity(nodes.len());
    for root in 0..nodes.len() {
        if mark[root] != Mark::New {
            continue;
        }
        // iterative DFS over parent edges; `path` holds the active chain
        let mut path: Vec<(NodeId, usize)> = vec![(root, 0)];
        mark[root] = Mark::Active;
        while let Some(&mut (id, ref mut next)) = path.last_mut() {
            if let Some(&p) = nodes[id].parents.get(*next) {
                *next += 1;
                match mark[p] {
                    Mark::Done => {}
                    Mark::Active => {
                        let start = path.iter().position(|(n, _)| *n == p).expect("active node is on the path");
                        let mut cycle: Vec<&str> = path[start..].iter().map(|(n, _)| nodes[*n].key.as_str()).collect();
                        cycle.push(&nodes[p].key);
                        return Err(DslError::Compile {
                            span: nodes[p].span,
                            message: format!("cyclic dependency: {}", cycle.join(" -> ")),
                        });
                    }
                    Mark::New => {
                        mark[p] = Mark::Active;
                        path.push((p, 0));
                    }
                }
            } else {
                mark[id] = Mark::Done;
                order.push(id);
                path.pop();
            }
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn build(src: &str, data: DataSet) -> Result<ModelGraph> {
        compile(&parse(src)?, &data)
    }

    #[test]
    fn beta_binomial_graph() {
        let g = build("model { p ~ dbeta(1, 1)\n y ~ dbin(p, 12) }", DataSet::new().scalar("y", 4.0)).unwrap();
        assert_eq!(g.unknown_names(), vec!["p"]);
        assert_eq!(g.observed(), vec![1]);
        assert_eq!(g.children(0), &[1]);
    }

    #[test]
    fn undefined_identifier() {
        let e = build("model { p ~ dbeta(1, 1)\n y ~ dbin(q, 12) }", DataSet::new()).unwrap_err();
        assert_eq!(e.to_string(), "2:11: undefined identifier `q`");
    }

    #[test]
    fn cycle_is_listed() {
        let e = build("model { a <- b\n b <- a }", DataSet::new()).unwrap_err();
        assert!(e.to_string().contains("cyclic dependency: a -> b -> a"), "{e}");
    }

    #[test]
    fn redefinition_and_missing_bound() {
        let e = build("model { a <- 1; a <- 2 }", DataSet::new()).unwrap_err();
        assert!(e.to_string().contains("defined more than once"));
        let e = build("model { for (i in 1:N) { y[i] ~ dnorm(0, 1) } }", DataSet::new()).unwrap_err();
        assert!(e.to_string().contains("loop bound `N` is missing"));
    }

    #[test]
    fn loops_unroll_against_data() {
        let data = DataSet::new().scalar("N", 3.0).array("y", vec![1.0, 2.0, 3.0]);
        let g = build("model { for (i in 1:N) { y[i] ~ dnorm(mu, 1) } mu ~ dnorm(0, 10) }", data).unwrap();
        assert_eq!(g.unknown_names(), vec!["mu"]);
        let mu = g.node_id("mu").unwrap();
        assert_eq!(g.markov_blanket(mu).len(), 4);
        assert_eq!(g.node_id("y[3]"), Some(2));
    }

    #[test]
    fn deterministic_chain_in_blanket() {
        let data = DataSet::new().array("y", vec![1.0, 0.0]).array("x", vec![0.5, -1.0]);
        let src = "model { for (i in 1:2) { eta[i] <- b * x[i]; y[i] ~ dbin(ilogit(eta[i]), 1) } b ~ dnorm(0, 2) }";
        let g = build(src, data).unwrap();
        let b = g.node_id("b").unwrap();
        let keys: Vec<&str> = g.markov_blanket(b).iter().map(|&i| g.node(i).key.as_str()).collect();
        assert_eq!(keys, vec!["b", "y[1]", "y[2]"]);
        assert_eq!(g.det_desc(b).len(), 2);
    }

    #[test]
    fn full_conditional_by_hand() {
        let g = build("model { p ~ dbeta(1, 1)\n y ~ dbin(p, 12) }", DataSet::new().scalar("y", 4.0)).unwrap();
        let mut v = g.initial_values(&BTreeMap::new()).unwrap();
        assert!((v[0] - 0.5).abs() < 1e-12);
        v[0] = 0.5;
        let want = Distribution::beta(1.0, 1.0).unwrap().log_density(0.5)
            + Distribution::binomial(12, 0.5).unwrap().log_density(4.0);
        assert!((g.log_full_conditional(0, &v) - want).abs() < 1e-12);
        v[0] = 1.5;
        assert_eq!(g.log_full_conditional(0, &v), f64::NEG_INFINITY);
    }
}
