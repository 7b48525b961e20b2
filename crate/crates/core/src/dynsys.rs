//! Rational maps on P^1 over an exact field: ramification, critical points,
//! multipliers, Möbius conjugation and post-critical mapping schemes.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::ff::{self, FieldDescriptor, FieldError, FiniteField};
use crate::field::Field;
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynError {
    #[error("degenerate map: {0}")]
    DegenerateMap(String),
    #[error("point is not fixed")]
    NotFixed,
    #[error("{0} points of degree > 1 could not be located in the coefficient field")]
    Unresolved(usize),
    #[error("singular matrix")]
    Singular,
    #[error("map is not a polynomial")]
    NotPolynomial,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A point of P^1: a finite coordinate or ∞.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProjPoint<E> {
    Finite(E),
    Infinity,
}

impl<E> ProjPoint<E> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    pub fn finite(&self) -> Option<&E> {
        match self {
            ProjPoint::Finite(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }
}

/// N/D with gcd(N, D) = 1 and D monic.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMap<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> fmt::Debug for RationalMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMap({self})")
    }
}

impl<F: Field> fmt::Display for RationalMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Multiplicity of x as a root of h (h nonzero).
fn root_multiplicity<F: Field>(h: &Poly<F>, x: &F::Elem) -> usize {
    let r = h.ring();
    let lin = Poly::new(r.clone(), vec![r.neg(x), r.one()]);
    let mut h = h.clone();
    let mut e = 0;
    while !h.is_zero() && r.is_zero(&h.eval(x)) {
        h = h.exact_div(&lin);
        e += 1;
    }
    e
}

/// Roots of g in its coefficient field, linear factors solved directly.
fn field_roots<F: Field>(g: &Poly<F>) -> Vec<F::Elem> {
    let r = g.ring();
    match g.degree() {
        None | Some(0) => Vec::new(),
        Some(1) => vec![r.neg(&r.div(&g.coeff(0), &g.coeff(1)).unwrap())],
        Some(_) => r.roots(g.coeffs()),
    }
}

/// Distinct roots of h, failing when some lie outside the field.
fn all_roots<F: Field>(h: &Poly<F>) -> Result<Vec<F::Elem>, DynError> {
    let mut out = Vec::new();
    let mut missing = 0;
    for (g, _) in h.squarefree_decomposition() {
        let rs = field_roots(&g);
        missing += g.degree().unwrap_or(0) - rs.len();
        out.extend(rs);
    }
    if missing > 0 {
        return Err(DynError::Unresolved(missing));
    }
    Ok(out)
}

impl<F: Field> RationalMap<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self, DynError> {
        if den.is_zero() {
            return Err(DynError::DegenerateMap("zero denominator".into()));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_constant() { (num, den) } else { (num.exact_div(&g), den.exact_div(&g)) };
        let r = den.ring().clone();
        let lc_inv = r.inv(den.leading().unwrap()).unwrap();
        num = num.scale(&lc_inv);
        den = den.scale(&lc_inv);
        let f = RationalMap { num, den };
        if f.degree() == 0 {
            return Err(DynError::DegenerateMap("constant map".into()));
        }
        Ok(f)
    }

    pub fn polynomial(num: Poly<F>) -> Result<Self, DynError> {
        let one = Poly::one(num.ring().clone());
        Self::new(num, one)
    }

    pub fn field(&self) -> &F {
        self.num.ring()
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    fn deg(p: &Poly<F>) -> usize {
        p.degree().unwrap_or(0)
    }

    pub fn eval(&self, x: &ProjPoint<F::Elem>) -> ProjPoint<F::Elem> {
        let r = self.field();
        match x {
            ProjPoint::Finite(x) => {
                let d = self.den.eval(x);
                if r.is_zero(&d) {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(r.div(&self.num.eval(x), &d).unwrap())
                }
            }
            ProjPoint::Infinity => {
                let (dn, dd) = (Self::deg(&self.num), Self::deg(&self.den));
                match (self.num.is_zero(), dn.cmp(&dd)) {
                    (true, _) | (false, std::cmp::Ordering::Less) => ProjPoint::Finite(r.zero()),
                    (false, std::cmp::Ordering::Greater) => ProjPoint::Infinity,
                    (false, std::cmp::Ordering::Equal) => {
                        ProjPoint::Finite(r.div(self.num.leading().unwrap(), self.den.leading().unwrap()).unwrap())
                    }
                }
            }
        }
    }

    /// n-fold composition.
    pub fn iterate(&self, n: usize) -> Result<Self, DynError> {
        let id = Self::new(Poly::x(self.field().clone()), Poly::one(self.field().clone()))?;
        (0..n).try_fold(id, |acc, _| self.compose(&acc))
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Self) -> Result<Self, DynError> {
        let d = self.degree();
        let (gn, gd) = (&other.num, &other.den);
        let hom = |p: &Poly<F>| {
            p.coeffs().iter().enumerate().fold(Poly::zero(self.field().clone()), |acc, (i, c)| {
                acc.add(&gn.pow(i as u64).mul(&gd.pow((d - i) as u64)).scale(c))
            })
        };
        Self::new(hom(&self.num), hom(&self.den))
    }

    /// Local multiplicities of the points over q, largest first.
    pub fn ram_profile(&self, q: &ProjPoint<F::Elem>) -> Vec<usize> {
        let d = self.degree();
        let (h, at_inf) = match q {
            ProjPoint::Finite(c) => {
                let h = self.num.sub(&self.den.scale(c));
                let di = d - Self::deg(&h);
                (h, di)
            }
            ProjPoint::Infinity => {
                let di = if Self::deg(&self.num) > Self::deg(&self.den) { d - Self::deg(&self.den) } else { 0 };
                (self.den.clone(), di)
            }
        };
        let mut out = Vec::new();
        if !h.is_constant() {
            for (g, e) in h.squarefree_decomposition() {
                out.extend(std::iter::repeat_n(e, g.degree().unwrap()));
            }
        }
        if at_inf > 0 {
            out.push(at_inf);
        }
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    /// Ramification index of f at x.
    pub fn local_index(&self, x: &ProjPoint<F::Elem>) -> usize {
        let y = self.eval(x);
        match x {
            ProjPoint::Finite(x) => match &y {
                ProjPoint::Finite(c) => root_multiplicity(&self.num.sub(&self.den.scale(c)), x),
                ProjPoint::Infinity => root_multiplicity(&self.den, x),
            },
            ProjPoint::Infinity => {
                let d = self.degree();
                match &y {
                    ProjPoint::Infinity => Self::deg(&self.num) - Self::deg(&self.den),
                    ProjPoint::Finite(c) => d - Self::deg(&self.num.sub(&self.den.scale(c))),
                }
            }
        }
    }

    /// N'D - ND'.
    pub fn wronskian(&self) -> Poly<F> {
        self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()))
    }

    /// Points with ramification index ≥ 2, with their indices.
    ///
    /// Index ≥ 2 at a finite non-pole x forces the Wronskian to vanish at x,
    /// and a pole of order e ≥ 2 is a root of the Wronskian of order e - 1,
    /// so scanning its roots and reading indices off the profile is
    /// complete, including wild points in characteristic p.
    pub fn critical_points(&self) -> Result<Vec<(ProjPoint<F::Elem>, usize)>, DynError> {
        let w = self.wronskian();
        if w.is_zero() {
            return Err(DynError::DegenerateMap("derivative vanishes identically".into()));
        }
        let mut out = Vec::new();
        for x in all_roots(&w)? {
            let pt = ProjPoint::Finite(x);
            let e = self.local_index(&pt);
            if e >= 2 {
                out.push((pt, e));
            }
        }
        let e_inf = self.local_index(&ProjPoint::Infinity);
        if e_inf >= 2 {
            out.push((ProjPoint::Infinity, e_inf));
        }
        Ok(out)
    }

    /// Σ (e - 1) over the critical points.
    pub fn ramification_total(&self) -> Result<usize, DynError> {
        Ok(self.critical_points()?.iter().map(|(_, e)| e - 1).sum())
    }

    /// Fixed points, finite ones first.
    pub fn fixed_points(&self) -> Result<Vec<ProjPoint<F::Elem>>, DynError> {
        let h = self.num.sub(&self.den.mul(&Poly::x(self.field().clone())));
        if h.is_zero() {
            return Err(DynError::DegenerateMap("identity map".into()));
        }
        let mut out: Vec<_> = all_roots(&h)?.into_iter().map(ProjPoint::Finite).collect();
        if self.eval(&ProjPoint::Infinity).is_infinity() {
            out.push(ProjPoint::Infinity);
        }
        Ok(out)
    }

    /// f'(x) at a fixed point x; at ∞ the derivative in the chart 1/z.
    pub fn multiplier(&self, x: &ProjPoint<F::Elem>) -> Result<F::Elem, DynError> {
        if self.eval(x) != *x {
            return Err(DynError::NotFixed);
        }
        let r = self.field();
        match x {
            ProjPoint::Finite(x) => {
                let d = self.den.eval(x);
                Ok(r.div(&self.wronskian().eval(x), &r.mul(&d, &d)).unwrap())
            }
            ProjPoint::Infinity => {
                let flip = Pgl2::new(r.clone(), [r.zero(), r.one(), r.one(), r.zero()])?;
                conjugate(self, &flip)?.multiplier(&ProjPoint::Finite(r.zero()))
            }
        }
    }

    pub fn multiplier_spectrum(&self) -> Result<Vec<F::Elem>, DynError> {
        self.fixed_points()?.iter().map(|x| self.multiplier(x)).collect()
    }

    /// Breadth-first forward closure of the critical points. A vertex first
    /// reached after `max_steps` applications of f is kept but its image is
    /// not computed; such vertices are listed as truncated.
    pub fn post_critical_orbit(&self, max_steps: usize) -> Result<MappingScheme<F::Elem>, DynError> {
        let crit = self.critical_points()?;
        let mut vertices: Vec<SchemeVertex<F::Elem>> = Vec::new();
        let mut index: HashMap<ProjPoint<F::Elem>, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        for (pt, e) in crit {
            index.insert(pt.clone(), vertices.len());
            queue.push_back((vertices.len(), 0usize));
            vertices.push(SchemeVertex { point: pt, critical: true, index: e });
        }
        let mut edges = Vec::new();
        let mut truncated = Vec::new();
        while let Some((v, depth)) = queue.pop_front() {
            if depth >= max_steps {
                truncated.push(v);
                continue;
            }
            let y = self.eval(&vertices[v].point);
            let t = match index.get(&y) {
                Some(&t) => t,
                None => {
                    let t = vertices.len();
                    index.insert(y.clone(), t);
                    vertices.push(SchemeVertex { point: y, critical: false, index: 1 });
                    queue.push_back((t, depth + 1));
                    t
                }
            };
            edges.push(SchemeEdge { source: v, target: t, weight: vertices[v].index });
        }
        edges.sort_by_key(|e| e.source);
        truncated.sort();
        Ok(MappingScheme { vertices, edges, truncated: !truncated.is_empty(), truncated_vertices: truncated })
    }
}

/// z ↦ (az + b)/(cz + d), scaled so the first nonzero entry is 1.
#[derive(Clone, PartialEq, Eq)]
pub struct Pgl2<F: Field> {
    field: F,
    m: [F::Elem; 4],
}

impl<F: Field> fmt::Debug for Pgl2<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pgl2({self})")
    }
}

impl<F: Field> fmt::Display for Pgl2<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.field;
        let top = Poly::new(r.clone(), vec![self.m[1].clone(), self.m[0].clone()]);
        let bot = Poly::new(r.clone(), vec![self.m[3].clone(), self.m[2].clone()]);
        if bot.is_constant() {
            write!(f, "{}", top)
        } else {
            write!(f, "({})/({})", top, bot)
        }
    }
}

impl<F: Field> Pgl2<F> {
    pub fn new(field: F, m: [F::Elem; 4]) -> Result<Self, DynError> {
        let det = field.sub(&field.mul(&m[0], &m[3]), &field.mul(&m[1], &m[2]));
        if field.is_zero(&det) {
            return Err(DynError::Singular);
        }
        let lead = m.iter().find(|x| !field.is_zero(x)).unwrap().clone();
        let li = field.inv(&lead).unwrap();
        let m = m.map(|x| field.mul(&x, &li));
        Ok(Pgl2 { field, m })
    }

    pub fn identity(field: F) -> Self {
        let (o, z) = (field.one(), field.zero());
        Pgl2 { m: [o.clone(), z.clone(), z, o], field }
    }

    /// z ↦ bz + c.
    pub fn affine(field: F, b: F::Elem, c: F::Elem) -> Result<Self, DynError> {
        let (z, o) = (field.zero(), field.one());
        Self::new(field, [b, c, z, o])
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn entries(&self) -> &[F::Elem; 4] {
        &self.m
    }

    pub fn inverse(&self) -> Self {
        let r = &self.field;
        let [a, b, c, d] = &self.m;
        Self::new(r.clone(), [d.clone(), r.neg(b), r.neg(c), a.clone()]).expect("inverse of an invertible matrix")
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Self) -> Self {
        let r = &self.field;
        let [a, b, c, d] = &self.m;
        let [e, f, g, h] = &other.m;
        let mm = |x: &F::Elem, y: &F::Elem, z: &F::Elem, w: &F::Elem| r.add(&r.mul(x, y), &r.mul(z, w));
        Self::new(r.clone(), [mm(a, e, b, g), mm(a, f, b, h), mm(c, e, d, g), mm(c, f, d, h)])
            .expect("product of invertible matrices")
    }

    pub fn apply(&self, x: &ProjPoint<F::Elem>) -> ProjPoint<F::Elem> {
        let r = &self.field;
        let [a, b, c, d] = &self.m;
        let (num, den) = match x {
            ProjPoint::Finite(x) => (r.add(&r.mul(a, x), b), r.add(&r.mul(c, x), d)),
            ProjPoint::Infinity => (a.clone(), c.clone()),
        };
        if r.is_zero(&den) {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(r.div(&num, &den).unwrap())
        }
    }
}

/// f^φ = φ ∘ f ∘ φ^{-1}, via the homogenized map.
pub fn conjugate<F: Field>(f: &RationalMap<F>, phi: &Pgl2<F>) -> Result<RationalMap<F>, DynError> {
    let r = f.field().clone();
    let d = f.degree();
    let [a, b, c, dd] = phi.inverse().m;
    let x = Poly::new(r.clone(), vec![b, a]);
    let y = Poly::new(r.clone(), vec![dd, c]);
    let hom = |p: &Poly<F>| {
        p.coeffs().iter().enumerate().fold(Poly::zero(r.clone()), |acc, (i, co)| {
            acc.add(&x.pow(i as u64).mul(&y.pow((d - i) as u64)).scale(co))
        })
    };
    let (n1, d1) = (hom(f.num()), hom(f.den()));
    let [a2, b2, c2, d2] = &phi.m;
    RationalMap::new(n1.scale(a2).add(&d1.scale(b2)), n1.scale(c2).add(&d1.scale(d2)))
}

/// Whether two lists agree as multisets.
pub fn same_multiset<E: Eq + std::hash::Hash + Clone>(a: &[E], b: &[E]) -> bool {
    let mut counts: HashMap<E, i64> = HashMap::new();
    for x in a {
        *counts.entry(x.clone()).or_default() += 1;
    }
    for x in b {
        *counts.entry(x.clone()).or_default() -= 1;
    }
    counts.values().all(|&c| c == 0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeVertex<E> {
    pub point: ProjPoint<E>,
    pub critical: bool,
    /// Ramification index at the point (1 when not critical).
    pub index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SchemeEdge {
    pub source: usize,
    pub target: usize,
    pub weight: usize,
}

/// Weighted digraph of critical and post-critical points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingScheme<E> {
    pub vertices: Vec<SchemeVertex<E>>,
    pub edges: Vec<SchemeEdge>,
    pub truncated: bool,
    pub truncated_vertices: Vec<usize>,
}

impl<E: Clone + Eq + std::hash::Hash> MappingScheme<E> {
    pub fn find(&self, x: &ProjPoint<E>) -> Option<usize> {
        self.vertices.iter().position(|v| v.point == *x)
    }

    pub fn out_edge(&self, v: usize) -> Option<&SchemeEdge> {
        self.edges.iter().find(|e| e.source == v)
    }

    /// Number of weakly connected components.
    pub fn component_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn root(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                i = parent[i];
            }
            i
        }
        for e in &self.edges {
            let (a, b) = (root(&mut parent, e.source), root(&mut parent, e.target));
            parent[a] = b;
        }
        (0..self.vertices.len()).filter(|&i| root(&mut parent, i) == i).count()
    }

    /// Isomorphic as weighted digraphs via the point map `phi`.
    pub fn is_isomorphic_via(&self, other: &Self, phi: impl Fn(&ProjPoint<E>) -> ProjPoint<E>) -> bool {
        if self.vertices.len() != other.vertices.len() || self.edges.len() != other.edges.len() {
            return false;
        }
        let img: Option<Vec<usize>> = self.vertices.iter().map(|v| other.find(&phi(&v.point))).collect();
        let Some(img) = img else { return false };
        let mut seen = img.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != img.len() {
            return false;
        }
        self.vertices.iter().zip(&img).all(|(v, &w)| {
            v.critical == other.vertices[w].critical && v.index == other.vertices[w].index
        }) && self.edges.iter().all(|e| {
            other.edges.iter().any(|o| o.source == img[e.source] && o.target == img[e.target] && o.weight == e.weight)
        })
    }

    /// Graphviz rendering; `label` formats finite coordinates.
    pub fn to_dot(&self, label: impl Fn(&E) -> String) -> String {
        let mut s = String::from("digraph mapping_scheme {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let name = match &v.point {
                ProjPoint::Finite(x) => label(x),
                ProjPoint::Infinity => "∞".to_string(),
            };
            let mut attrs = vec![format!("label=\"{}\"", name.replace('"', "\\\""))];
            if v.critical {
                attrs.push("shape=doublecircle".into());
            }
            if self.truncated_vertices.contains(&i) {
                attrs.push("style=dashed".into());
            }
            s.push_str(&format!("  n{i} [{}];\n", attrs.join(", ")));
        }
        for e in &self.edges {
            s.push_str(&format!("  n{} -> n{} [label=\"{}\"];\n", e.source, e.target, e.weight));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self, label: impl Fn(&E) -> String) -> Value {
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .map(|v| {
                let point = match &v.point {
                    ProjPoint::Finite(x) => label(x),
                    ProjPoint::Infinity => "inf".into(),
                };
                json!({"point": point, "critical": v.critical, "index": v.index})
            })
            .collect();
        json!({
            "vertices": vertices,
            "edges": self.edges,
            "truncated": self.truncated,
            "truncated_vertices": self.truncated_vertices,
        })
    }
}

/// The map with coefficients moved into an extension field.
pub fn base_change(f: &RationalMap<FiniteField>, k: &FiniteField) -> Result<RationalMap<FiniteField>, DynError> {
    RationalMap::new(ff::embed_poly(f.num(), k)?, ff::embed_poly(f.den(), k)?)
}

/// Base change to the smallest extension containing every critical point
/// and every fixed point.
pub fn split_for_dynamics(f: &RationalMap<FiniteField>) -> Result<RationalMap<FiniteField>, DynError> {
    use num_integer::Integer;
    let base = f.field().clone();
    let w = f.wronskian();
    if w.is_zero() {
        return Err(DynError::DegenerateMap("derivative vanishes identically".into()));
    }
    let fix = f.num().sub(&f.den().mul(&Poly::x(base.clone())));
    let mut l = ff::splitting_degree(&w)?;
    if !fix.is_zero() {
        l = l.lcm(&ff::splitting_degree(&fix)?);
    }
    if l == 1 {
        return Ok(f.clone());
    }
    let k = ff::make_field(base.p(), base.degree() * l, None)?;
    base_change(f, &k)
}

/// `{"field": descriptor, "num": [coeff, ...], "den": [coeff, ...]}` with
/// coefficients as coordinate lists, constant term first. A missing `den`
/// means 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FqMapJson {
    pub field: FieldDescriptor,
    pub num: Vec<Vec<u64>>,
    #[serde(default)]
    pub den: Option<Vec<Vec<u64>>>,
}

impl FqMapJson {
    pub fn build(&self) -> Result<RationalMap<FiniteField>, DynError> {
        let k = self.field.build()?;
        let poly = |cs: &[Vec<u64>]| -> Result<Poly<FiniteField>, DynError> {
            let coeffs = cs.iter().map(|c| k.element(c)).collect::<Result<Vec<_>, _>>()?;
            Ok(Poly::new(k.clone(), coeffs))
        };
        let den = match &self.den {
            Some(d) => poly(d)?,
            None => Poly::one(k.clone()),
        };
        RationalMap::new(poly(&self.num)?, den)
    }

    pub fn from_map(f: &RationalMap<FiniteField>) -> Self {
        let coords = |p: &Poly<FiniteField>| p.coeffs().iter().map(|c| c.coords().to_vec()).collect();
        FqMapJson {
            field: f.field().descriptor(),
            num: coords(f.num()),
            den: if f.is_polynomial() { None } else { Some(coords(f.den())) },
        }
    }
}
