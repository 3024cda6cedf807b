use serde::{Deserialize, Serialize};

use crate::linalg::{int_rank, saturate_rows};

use super::model::{to_bits, F2Span, IsotropyModel, Web};
use super::WebError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Requires `2^r ≥ n²` and checks it again after every reduction.
    Strict,
    /// Drops the rank requirement and never recurses, since the induction
    /// hypothesis is unavailable; for small exhaustive sweeps.
    Relaxed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedInvolution {
    pub name: String,
    pub bits: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GateDecision {
    pub subgroup: Vec<Vec<u8>>,
    pub n: usize,
    pub dim: usize,
    pub dim_ker: usize,
    pub recurse: bool,
}

/// Passing to a fixed-point component `F(H)` with the effective torus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub case: u8,
    pub subgroup: Vec<Vec<u8>>,
    pub fixed_planes: Vec<usize>,
    pub dim: usize,
    pub dim_ker: usize,
    pub model: IsotropyModel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelNote {
    /// `dim ker` of the torus on the fixed component used.
    pub q_corank: usize,
    pub mod2_nullity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub rho: Vec<u8>,
    /// `k_i`: codimension of `F(ρ_i)` inside `R_{i−1}`.
    pub k: usize,
    /// Size of the subgroup `ρ_i` was chosen from.
    pub group_size: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case5Claims {
    pub dims_mod4: bool,
    pub halving: bool,
    pub terminal_zero: bool,
}

impl Case5Claims {
    pub fn all(&self) -> bool {
        self.dims_mod4 && self.halving && self.terminal_zero
    }
}

/// Trace of the chain `R_0 ⊇ R_1 ⊇ … ⊇ R_l` of nested fixed sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case5Trace {
    pub m: usize,
    pub l: usize,
    pub steps: Vec<ChainStep>,
    /// `dim R_0, …, dim R_l`.
    pub dims: Vec<usize>,
    pub claims: Case5Claims,
    pub j: Option<usize>,
    /// `ρ_j` after the replacement sweep.
    pub rho_j: Option<Vec<u8>>,
    pub replaced: Vec<usize>,
    /// `l_1, …, l_{j−1}` after the sweep.
    pub l_values: Vec<usize>,
    pub pair_index: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub case: u8,
    pub actors: Vec<NamedInvolution>,
    /// Generators of the subgroup whose fixed component is the ambient space.
    pub ambient: Vec<Vec<u8>>,
    pub ambient_dim: usize,
    /// Generators of the two transverse fixed components.
    pub pair: [Vec<Vec<u8>>; 2],
    pub codims: [usize; 2],
    pub inequality: String,
    pub target: String,
    pub kernel: KernelNote,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chain: Option<Case5Trace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Leaf {
    Certificate(Certificate),
    /// Recursion reached a zero-dimensional component.
    PointComponent,
    Flagged {
        case: u8,
        reason: String,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        chain: Option<Case5Trace>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WebResult {
    pub mode: SearchMode,
    pub model: IsotropyModel,
    pub normalized: IsotropyModel,
    pub path: Vec<Reduction>,
    pub leaf: Leaf,
}

impl WebResult {
    /// The model in which the leaf lives.
    pub fn leaf_model(&self) -> &IsotropyModel {
        self.path.last().map_or(&self.normalized, |r| &r.model)
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.leaf {
            Leaf::Certificate(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_flagged(&self) -> bool {
        matches!(self.leaf, Leaf::Flagged { .. })
    }
}

/// Recurse into `F(H)` iff `(dim F(H))² · 2^{dim ker} ≤ n²`.
pub fn induction_gate(web: &Web, gens: &[u32]) -> GateDecision {
    let n = web.n();
    let dim = n - web.codim(gens);
    let dim_ker = web.dim_ker(gens);
    let recurse = (dim as u128).pow(2) << dim_ker <= (n as u128).pow(2);
    GateDecision { subgroup: gens.iter().map(|&g| to_bits(g, web.r)).collect(), n, dim, dim_ker, recurse }
}

fn bits(web: &Web, v: u32) -> Vec<u8> {
    to_bits(v, web.r)
}

fn named(web: &Web, name: &str, v: u32) -> NamedInvolution {
    NamedInvolution { name: name.to_string(), bits: bits(web, v) }
}

/// Saturated weights of the effective torus on the planes in `mask`.
fn reduced_weights(model: &IsotropyModel, mask: u64) -> Result<Vec<Vec<i64>>, WebError> {
    let restricted = model.restrict(mask);
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for row in restricted {
        basis.push(row);
        if int_rank(&basis) < basis.len() {
            basis.pop();
        }
    }
    saturate_rows(&basis).ok_or_else(|| WebError::EffectivenessLoss("saturation of the restricted weights failed".into()))
}

fn reduce(web: &Web, gens: &[u32], case: u8, mode: SearchMode) -> Result<Reduction, WebError> {
    let mask = web.fixed(gens);
    let dim = web.n() - web.codim(gens);
    if dim % 4 != 0 || dim >= web.n() {
        return Err(WebError::ModelDegenerate(format!("fixed component of dimension {dim} in dimension {}", web.n())));
    }
    let w = reduced_weights(web.model, mask)?;
    let model = IsotropyModel { n: dim, r: w.len(), w };
    let dim_ker = web.dim_ker_of(mask);
    if model.r + dim_ker != web.r {
        return Err(WebError::EffectivenessLoss(format!("reduced rank {} with kernel {dim_ker} from r = {}", model.r, web.r)));
    }
    if mode == SearchMode::Strict && !model.meets_rank_bound() {
        return Err(WebError::RankBoundViolated(format!("rank {} on a component of dimension {dim}", model.r)));
    }
    Ok(Reduction {
        case,
        subgroup: gens.iter().map(|&g| bits(web, g)).collect(),
        fixed_planes: (0..web.model.planes()).filter(|&i| mask >> i & 1 == 1).collect(),
        dim,
        dim_ker,
        model,
    })
}

enum Step {
    Leaf(Leaf),
    Recurse(Reduction),
}

/// Searches for a connectedness certificate, recursing into fixed
/// components whenever the induction gate allows it.
pub fn find_certificate(model: &IsotropyModel, mode: SearchMode) -> Result<WebResult, WebError> {
    model.validate()?;
    if model.n % 4 != 0 {
        return Err(WebError::Precondition(format!("n = {} is not divisible by 4", model.n)));
    }
    if mode == SearchMode::Strict && !model.meets_rank_bound() {
        return Err(WebError::Precondition(format!("r = {} is below 2·log₂(n) for n = {}", model.r, model.n)));
    }
    let w = saturate_rows(&model.w).ok_or_else(|| WebError::EffectivenessLoss("saturation failed".into()))?;
    let normalized = IsotropyModel { n: model.n, r: model.r, w };
    let mut path: Vec<Reduction> = Vec::new();
    let leaf = loop {
        let current = path.last().map_or(&normalized, |r| &r.model);
        if current.n == 0 {
            break Leaf::PointComponent;
        }
        match level(current, mode)? {
            Step::Leaf(leaf) => break leaf,
            Step::Recurse(red) => {
                assert!(red.model.n < current.n, "recursion must reduce the dimension");
                path.push(red);
            }
        }
    };
    Ok(WebResult { mode, model: model.clone(), normalized, path, leaf })
}

macro_rules! gate {
    ($web:expr, $gens:expr, $case:expr, $mode:expr) => {
        if $mode == SearchMode::Strict && induction_gate($web, $gens).recurse {
            return Ok(Step::Recurse(reduce($web, $gens, $case, $mode)?));
        }
    };
}

fn kernel_note(web: &Web, mask: u64) -> KernelNote {
    KernelNote { q_corank: web.dim_ker_of(mask), mod2_nullity: web.mod2_nullity_of(mask) }
}

/// First involution (lex order) that fixes `keep` pointwise and whose
/// negative set inside `within` is a nonempty proper subset of `target`.
fn splitter(web: &Web, keep: u64, within: u64, target: u64) -> Option<u32> {
    web.involutions().find(|&u| {
        let a = web.neg(u) & within;
        web.neg(u) & keep == 0 && a != 0 && a != target
    })
}

/// Candidate pairs tried per case before moving on.
pub const MAX_ATTEMPTS: usize = 256;

fn is_flag(step: &Step) -> bool {
    matches!(step, Step::Leaf(Leaf::Flagged { .. }))
}

fn level(model: &IsotropyModel, mode: SearchMode) -> Result<Step, WebError> {
    let web = Web::new(model);
    let gamma = web.build_gamma();
    let mut first_flag: Option<Step> = None;
    let mut attempt = |step: Step| -> Option<Step> {
        if is_flag(&step) {
            first_flag.get_or_insert(step);
            None
        } else {
            Some(step)
        }
    };

    let mut span = F2Span::default();
    for &v in &gamma.vertices {
        span.insert(v);
    }
    if span.dim() + 2 <= web.r {
        if let Some(step) = attempt(case1(&web, &span, mode)?) {
            return Ok(step);
        }
    }

    let vs = &gamma.vertices;
    let pairs = || vs.iter().enumerate().flat_map(move |(a, &s)| vs[a + 1..].iter().map(move |&t| (s, t)));
    let wide = pairs().filter(|&(s, t)| {
        let mask = web.fixed(&[s, t]);
        web.dim_ker_upper_bound(mask) >= 3 && web.dim_ker_of(mask) >= 3
    });
    for (s, t) in wide.take(MAX_ATTEMPTS) {
        if let Some(step) = attempt(case2(&web, s, t, mode)?) {
            return Ok(step);
        }
    }
    for (s, t) in pairs().filter(|&(s, t)| !gamma.has_edge(s, t)).take(MAX_ATTEMPTS) {
        if let Some(step) = attempt(case3(&web, s, t, mode)?) {
            return Ok(step);
        }
    }
    let mut closed = true;
    for (s, t) in pairs().filter(|&(s, t)| !gamma.contains(s ^ t)).take(MAX_ATTEMPTS) {
        closed = false;
        if let Some(step) = attempt(case4(&web, s, t, mode)?) {
            return Ok(step);
        }
    }
    if closed {
        let mut group = vec![0];
        group.extend(vs.iter().copied());
        if let Some(step) = attempt(case5(&web, &group, mode)?) {
            return Ok(step);
        }
    }
    Ok(first_flag.unwrap_or_else(|| flagged(0, "no case applies")))
}

fn case3(web: &Web, s: u32, t: u32, mode: SearchMode) -> Result<Step, WebError> {
    gate!(web, &[s, t], 3, mode);
    let cert = Certificate {
        case: 3,
        actors: vec![named(web, "sigma", s), named(web, "tau", t)],
        ambient: vec![],
        ambient_dim: web.n(),
        pair: [vec![bits(web, s)], vec![bits(web, t)]],
        codims: [web.codim(&[s]), web.codim(&[t])],
        inequality: String::new(),
        target: "N".into(),
        kernel: kernel_note(web, web.fixed(&[s, t])),
        chain: None,
    };
    Ok(Step::Leaf(finish(cert)))
}

/// Fills in the inequality, or flags the certificate if it fails.
fn finish(mut cert: Certificate) -> Leaf {
    let [k1, k2] = cert.codims;
    let lhs = 2 * k1 + 2 * k2;
    let holds = lhs <= cert.ambient_dim && k1 > 0 && k2 > 0;
    cert.inequality = format!("2·{k1} + 2·{k2} = {lhs} ≤ {}", cert.ambient_dim);
    if holds {
        Leaf::Certificate(cert)
    } else {
        Leaf::Flagged {
            case: cert.case,
            reason: format!("pair codimensions {k1}, {k2} fail 2k1 + 2k2 ≤ {}", cert.ambient_dim),
            chain: cert.chain,
        }
    }
}

fn flagged(case: u8, reason: impl Into<String>) -> Step {
    Step::Leaf(Leaf::Flagged { case, reason: reason.into(), chain: None })
}

fn case1(web: &Web, span: &F2Span, mode: SearchMode) -> Result<Step, WebError> {
    let s = (0..web.model.planes()).fold(0u32, |acc, i| acc ^ web.col_mask(i));
    let next = web
        .involutions()
        .filter(|&v| (v & s).count_ones() % 2 == 0 && !span.contains(v) && web.neg(v) != 0)
        .min_by_key(|&v| (web.codim(&[v]), v));
    let Some(v) = next else {
        return Ok(flagged(1, "no involution outside the span of the vertices"));
    };
    gate!(web, &[v], 1, mode);
    let moved = web.neg(v);
    let Some(u) = splitter(web, web.fixed(&[v]), web.full, moved) else {
        return Ok(flagged(1, "no involution splits the planes moved by the new generator"));
    };
    let cert = Certificate {
        case: 1,
        actors: vec![named(web, "iota_next", v), named(web, "iota", u)],
        ambient: vec![],
        ambient_dim: web.n(),
        pair: [vec![bits(web, u)], vec![bits(web, u ^ v)]],
        codims: [web.codim(&[u]), web.codim(&[u ^ v])],
        inequality: String::new(),
        target: "N".into(),
        kernel: kernel_note(web, web.fixed(&[v])),
        chain: None,
    };
    Ok(Step::Leaf(finish(cert)))
}

fn case2(web: &Web, s: u32, t: u32, mode: SearchMode) -> Result<Step, WebError> {
    gate!(web, &[t], 2, mode);
    gate!(web, &[s], 2, mode);
    let ft = web.fixed(&[t]);
    let target = web.neg(s) & ft;
    let Some(u) = splitter(web, web.fixed(&[s, t]), ft, target) else {
        return Ok(flagged(2, "no involution splits the planes of F(tau) moved by sigma"));
    };
    let within = |g: u32| 2 * (web.neg(g) & ft).count_ones() as usize;
    let cert = Certificate {
        case: 2,
        actors: vec![named(web, "sigma", s), named(web, "tau", t), named(web, "iota", u)],
        ambient: vec![bits(web, t)],
        ambient_dim: web.n() - web.codim(&[t]),
        pair: [vec![bits(web, t), bits(web, u)], vec![bits(web, t), bits(web, u ^ s)]],
        codims: [within(u), within(u ^ s)],
        inequality: String::new(),
        target: "F(tau)".into(),
        kernel: kernel_note(web, web.fixed(&[s, t])),
        chain: None,
    };
    Ok(Step::Leaf(finish(cert)))
}

fn case4(web: &Web, s: u32, t: u32, mode: SearchMode) -> Result<Step, WebError> {
    let st = s ^ t;
    gate!(web, &[st], 4, mode);
    let Some(rho) = splitter(web, web.fixed(&[st]), web.full, web.neg(st)) else {
        return Ok(flagged(4, "no involution splits the planes moved by sigma·tau"));
    };
    let cert = Certificate {
        case: 4,
        actors: vec![named(web, "sigma", s), named(web, "tau", t), named(web, "rho", rho)],
        ambient: vec![],
        ambient_dim: web.n(),
        pair: [vec![bits(web, rho)], vec![bits(web, rho ^ st)]],
        codims: [web.codim(&[rho]), web.codim(&[rho ^ st])],
        inequality: String::new(),
        target: "N".into(),
        kernel: kernel_note(web, web.fixed(&[st])),
        chain: None,
    };
    Ok(Step::Leaf(finish(cert)))
}

fn case5(web: &Web, group: &[u32], mode: SearchMode) -> Result<Step, WebError> {
    let Some(&rho1) = group.iter().filter(|&&g| g != 0).max_by_key(|&&g| (web.codim(&[g]), std::cmp::Reverse(g))) else {
        return Ok(flagged(5, "no involutions with codimension divisible by 4"));
    };
    gate!(web, &[rho1], 5, mode);
    let trace = match case5_chain(web, group) {
        Ok(t) => t,
        Err(e) => return Ok(flagged(5, e.to_string())),
    };
    let Some(i) = trace.pair_index.filter(|_| trace.claims.all()) else {
        return Ok(Step::Leaf(Leaf::Flagged {
            case: 5,
            reason: "chain claims fail or no pair was found".into(),
            chain: Some(trace),
        }));
    };
    let rhos: Vec<u32> = trace.steps.iter().map(|s| super::model::from_bits(&s.rho)).collect();
    let rho_j = super::model::from_bits(trace.rho_j.as_ref().expect("j is set when a pair exists"));
    let ambient: Vec<u32> = rhos[..i - 1].to_vec();
    let fr = web.fixed(&ambient);
    let within = |g: u32| 2 * (web.neg(g) & fr).count_ones() as usize;
    let with = |g: u32| ambient.iter().chain(std::iter::once(&g)).map(|&a| bits(web, a)).collect::<Vec<_>>();
    let cert = Certificate {
        case: 5,
        actors: vec![named(web, "rho_j", rho_j), named(web, "rho_i", rhos[i - 1])],
        ambient: ambient.iter().map(|&a| bits(web, a)).collect(),
        ambient_dim: trace.dims[i - 1],
        pair: [with(rho_j), with(rho_j ^ rhos[i - 1])],
        codims: [within(rho_j), within(rho_j ^ rhos[i - 1])],
        inequality: String::new(),
        target: format!("R_{}", i - 1),
        kernel: kernel_note(web, fr),
        chain: Some(trace),
    };
    Ok(Step::Leaf(finish(cert)))
}

/// Nested fixed sets `R_i = F(ρ_1, …, ρ_i)` for a group `G` of
/// involutions (given as a list of its elements).
///
/// `ρ_1` has maximal codimension. Each later `ρ_{i+1}` is taken from the
/// subgroup of elements acting on `R_i` with codimension divisible by 4,
/// outside the span of the earlier choices, maximizing `k_{i+1}`.
pub fn case5_chain(web: &Web, group: &[u32]) -> Result<Case5Trace, WebError> {
    let mut span = F2Span::default();
    for &g in group {
        span.insert(g);
    }
    let m = span.dim();
    if m == 0 {
        return Err(WebError::ModelDegenerate("trivial group".into()));
    }
    let l = m.div_ceil(2).max(1);
    let mut chosen = F2Span::default();
    let mut rhos: Vec<u32> = Vec::new();
    let mut steps: Vec<ChainStep> = Vec::new();
    let mut dims = vec![web.n()];
    let mut current: Vec<u32> = group.to_vec();
    let mut fr = web.full;
    for _ in 0..l {
        let k_of = |g: u32| 2 * (web.neg(g) & fr).count_ones() as usize;
        let pick = current.iter().copied().filter(|&g| !chosen.contains(g)).max_by_key(|&g| (k_of(g), std::cmp::Reverse(g)));
        let Some(rho) = pick else {
            return Err(WebError::ModelDegenerate(format!("chain stops after {} steps", rhos.len())));
        };
        let k = k_of(rho);
        steps.push(ChainStep { rho: bits(web, rho), k, group_size: current.len() });
        chosen.insert(rho);
        rhos.push(rho);
        fr &= !web.neg(rho);
        dims.push(2 * fr.count_ones() as usize);
        current.retain(|&g| (web.neg(g) & fr).count_ones() % 2 == 0);
    }
    let ks: Vec<usize> = steps.iter().map(|s| s.k).collect();
    let claims = Case5Claims {
        dims_mod4: dims.iter().all(|d| d % 4 == 0),
        halving: ks.windows(2).all(|w| w[0] >= 2 * w[1]),
        terminal_zero: ks.last() == Some(&0),
    };
    let mut trace = Case5Trace {
        m,
        l,
        steps,
        dims,
        claims,
        j: None,
        rho_j: None,
        replaced: vec![],
        l_values: vec![],
        pair_index: None,
    };
    let Some(j) = ks.iter().position(|&k| k == 0).map(|p| p + 1) else {
        return Ok(trace);
    };
    // fixed planes of R_0, …, R_l
    let fixed_at: Vec<u64> = (0..=l).map(|h| web.fixed(&rhos[..h])).collect();
    let mut rho_j = rhos[j - 1];
    let mut l_values = vec![0; j - 1];
    for i in (1..j).rev() {
        let li = 2 * (web.neg(rho_j) & web.neg(rhos[i - 1]) & fixed_at[i - 1]).count_ones() as usize;
        if 2 * li > ks[i - 1] {
            rho_j ^= rhos[i - 1];
            trace.replaced.push(i);
            l_values[i - 1] = ks[i - 1] - li;
        } else {
            l_values[i - 1] = li;
        }
    }
    trace.j = Some(j);
    trace.rho_j = Some(bits(web, rho_j));
    trace.pair_index = (1..j).rev().find(|&i| l_values[i - 1] > 0);
    trace.l_values = l_values;
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::web::model::from_bits;

    fn from_columns(cols: &[&[i64]]) -> IsotropyModel {
        let r = cols[0].len();
        let w = (0..r).map(|j| cols.iter().map(|c| c[j]).collect()).collect();
        IsotropyModel::new(2 * cols.len(), w).unwrap()
    }

    fn chain_instance() -> IsotropyModel {
        from_columns(&[&[1, 0, 0], &[1, 1, 0], &[1, 0, 1], &[1, 1, 1], &[2, 0, 0], &[0, 2, 0], &[0, 0, 2], &[2, 2, 2]])
    }

    #[test]
    fn chain_on_full_group() {
        let m = chain_instance();
        let web = Web::new(&m);
        let group: Vec<u32> = (0..8).collect();
        let t = case5_chain(&web, &group).unwrap();
        assert_eq!((t.m, t.l), (3, 2));
        assert_eq!(t.steps[0].rho, vec![1, 0, 0]);
        assert_eq!(t.steps[0].k, 8);
        assert_eq!(t.steps[1].rho, vec![0, 0, 1]);
        assert_eq!(t.steps[1].k, 0);
        assert_eq!(t.dims, vec![16, 8, 8]);
        assert!(t.claims.all());
        assert_eq!(t.j, Some(2));
        assert!(t.replaced.is_empty());
        assert_eq!(t.l_values, vec![4]);
        assert_eq!(t.pair_index, Some(1));
    }

    #[test]
    fn chain_replacement_sweep() {
        // ρ_2 = e_3 moves 3 of the 4 planes moved by ρ_1 = e_1
        let m = from_columns(&[&[1, 0, 1], &[1, 0, 1], &[1, 0, 1], &[1, 0, 0], &[0, 2, 0], &[0, 0, 2]]);
        let web = Web::new(&m);
        let group: Vec<u32> = (0..8).collect();
        let t = case5_chain(&web, &group).unwrap();
        assert_eq!(t.steps[0].rho, vec![1, 0, 0]);
        assert_eq!(t.steps[0].k, 8);
        assert_eq!(t.steps[1].rho, vec![0, 0, 1]);
        assert_eq!(t.steps[1].k, 0);
        assert_eq!(t.j, Some(2));
        assert_eq!(t.replaced, vec![1]);
        assert_eq!(t.l_values, vec![2]);
        assert_eq!(t.rho_j, Some(vec![1, 0, 1]));
        assert_eq!(t.pair_index, Some(1));
    }

    #[test]
    fn gate_examples() {
        // n = 32, r = 10: an involution fixing 8 planes on which the weights
        // have rank 8 gives dim 16 and a two-dimensional kernel
        let mut cols: Vec<Vec<i64>> = Vec::new();
        for j in 0..8 {
            let mut c = vec![0; 10];
            c[j] = 2;
            cols.push(c);
        }
        for j in 0..8 {
            let mut c = vec![0; 10];
            c[8] = 1;
            c[9] = (j % 2) as i64;
            c[j] += 1;
            cols.push(c);
        }
        let refs: Vec<&[i64]> = cols.iter().map(Vec::as_slice).collect();
        let m = from_columns(&refs);
        let web = Web::new(&m);
        let h = from_bits(&[0, 0, 0, 0, 0, 0, 0, 0, 1, 0]);
        let g = induction_gate(&web, &[h]);
        assert_eq!((g.dim, g.dim_ker), (16, 2));
        assert!(g.recurse);
        let red = reduce(&web, &[h], 1, SearchMode::Strict).unwrap();
        assert_eq!((red.model.n, red.model.r), (16, 8));
        assert!(red.model.meets_rank_bound());


        // dim 14 with a one-dimensional kernel in dimension 16 stays put
        let m = from_columns(&[&[1, 0], &[0, 2], &[0, 2], &[0, 2], &[0, 2], &[0, 2], &[0, 2], &[0, 2]]);
        let web = Web::new(&m);
        let g = induction_gate(&web, &[from_bits(&[1, 0])]);
        assert_eq!((g.dim, g.dim_ker), (14, 1));
        assert!(!g.recurse);
    }

    #[test]
    fn two_disjoint_vertices_give_case3() {
        let m = from_columns(&[&[1, 0], &[1, 0], &[0, 1], &[0, 1], &[2, 0], &[0, 2], &[2, 2], &[2, -2]]);
        let res = find_certificate(&m, SearchMode::Relaxed).unwrap();
        let c = res.certificate().expect("certificate");
        assert_eq!(c.case, 3);
        assert_eq!(c.codims, [4, 4]);
        assert_eq!(c.inequality, "2·4 + 2·4 = 16 ≤ 16");
        assert!(crate::web::check_result(&res).ok);
    }

    #[test]
    fn case1_subgroup_has_codims_divisible_by_four() {
        for seed in 0..20 {
            let m = crate::web::random_model(16, 6, seed, 2).unwrap();
            let web = Web::new(&m);
            let s = (0..m.planes()).fold(0u32, |acc, i| acc ^ web.col_mask(i));
            for v in web.involutions().filter(|&v| (v & s).count_ones() % 2 == 0) {
                assert_eq!(web.codim(&[v]) % 4, 0);
            }
        }
    }

    #[test]
    fn complete_gamma_flags_in_case5() {
        // every nonzero v ∈ Z_2^3 moves the odd columns with ⟨v, w⟩ odd: a
        // simplex-code pattern, so any two involutions share a moved plane
        let m = from_columns(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1], &[2, 0, 0]]);
        let web = Web::new(&m);
        let g = web.build_gamma();
        assert_eq!(g.vertices.len(), 7);
        assert_eq!(g.edges().count(), 21);
        let res = find_certificate(&m, SearchMode::Relaxed).unwrap();
        match &res.leaf {
            Leaf::Flagged { case: 5, chain: Some(t), .. } => assert!(!t.claims.terminal_zero),
            other => panic!("unexpected leaf {other:?}"),
        }
    }

    #[test]
    fn preconditions() {
        let m = from_columns(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert!(matches!(find_certificate(&m, SearchMode::Relaxed), Err(WebError::Precondition(_))));
        let m = from_columns(&[&[1, 0], &[0, 1], &[1, 1], &[1, -1]]);
        assert!(matches!(find_certificate(&m, SearchMode::Strict), Err(WebError::Precondition(_))));
        assert!(find_certificate(&m, SearchMode::Relaxed).is_ok());
    }

    #[test]
    fn strict_search_on_random_models() {
        for seed in 0..20 {
            let m = crate::web::random_model(16, 8, seed, 2).unwrap();
            let res = find_certificate(&m, SearchMode::Strict).unwrap();
            if let Some(c) = res.certificate() {
                assert!(2 * c.codims[0] + 2 * c.codims[1] <= c.ambient_dim);
            }
        }
    }
}
