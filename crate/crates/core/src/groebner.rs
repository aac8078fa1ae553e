//! Gröbner bases and ideal arithmetic.
//!
//! Buchberger's algorithm with the normal selection strategy (smallest
//! S-pair lcm first) and the coprimality criterion, followed by full
//! interreduction, so every ideal has one canonical reduced basis per
//! monomial order: elements monic, tails irreducible, sorted ascending by
//! leading monomial.  Products, intersections, colon ideals, saturations,
//! and block elimination are built on top; the latter three use tag
//! variables appended to the ring (existing variable indices never move).

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::poly::{exact_div, Polynomial};
use crate::ring::Ring;

/// Fully reduces `f` against `basis`: no term of the result is divisible by
/// any basis leading monomial.  Deterministic: terms are reduced largest
/// first, always against the first applicable basis element.
pub fn normal_form(f: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let ring = f.ring().clone();
    let mut p = f.clone();
    let mut rem = Polynomial::zero(ring.clone());
    'outer: while let Some((m, c)) = p.terms().first().map(|(m, c)| (m.clone(), c.clone())) {
        for g in basis {
            let Some(glm) = g.leading_monomial() else { continue };
            if let Some(q) = m.try_div(glm) {
                let factor = c.div(g.leading_coeff().unwrap()).expect("nonzero lc");
                p = p.sub(&g.mul_term(&q, &factor));
                continue 'outer;
            }
        }
        // leading term irreducible: move it to the remainder
        let t = Polynomial::monomial(ring.clone(), m.clone(), c.clone());
        rem = rem.add(&t);
        p = p.sub(&t);
    }
    rem
}

fn s_poly(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let lf = f.leading_monomial().unwrap();
    let lg = g.leading_monomial().unwrap();
    let l = lf.lcm(lg);
    let uf = l.try_div(lf).unwrap();
    let ug = l.try_div(lg).unwrap();
    let cf = f.leading_coeff().unwrap().inv().expect("nonzero lc");
    let cg = g.leading_coeff().unwrap().inv().expect("nonzero lc");
    f.mul_term(&uf, &cf).sub(&g.mul_term(&ug, &cg))
}

/// Deterministic total comparison of polynomials in one ring: by leading
/// monomial, then term by term.
fn cmp_polys(a: &Polynomial, b: &Polynomial) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let order = a.ring().order();
    let (ta, tb) = (a.terms(), b.terms());
    for i in 0..ta.len().min(tb.len()) {
        match order.cmp(&ta[i].0, &tb[i].0) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // same monomial: compare coefficients via string (rare tie-break)
        let (ca, cb) = (format!("{}", ta[i].1), format!("{}", tb[i].1));
        match ca.cmp(&cb) {
            Ordering::Equal => {}
            ord => return ord,
        }
    }
    ta.len().cmp(&tb.len())
}

/// Computes the reduced Gröbner basis of the ideal generated by `gens`
/// with respect to the ring order of the first generator's ring.
///
/// Returns the canonical form: monic elements with fully reduced tails,
/// sorted ascending by leading monomial.  The result is independent of the
/// presentation (ordering and duplicates) of the generators.
pub fn buchberger(ring: &Arc<Ring>, gens: &[Polynomial]) -> Vec<Polynomial> {
    let mut g: Vec<Polynomial> = gens
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| f.monic())
        .collect();
    g.sort_by(cmp_polys);
    g.dedup();

    if g.is_empty() {
        return Vec::new();
    }

    // pair queue: indices plus cached lcm of leading monomials
    let mut pairs: Vec<(usize, usize, Monomial)> = Vec::new();
    let add_pairs = |pairs: &mut Vec<(usize, usize, Monomial)>, g: &[Polynomial], j: usize| {
        for i in 0..j {
            let li = g[i].leading_monomial().unwrap();
            let lj = g[j].leading_monomial().unwrap();
            if !li.coprime(lj) {
                pairs.push((i, j, li.lcm(lj)));
            }
        }
    };
    for j in 0..g.len() {
        add_pairs(&mut pairs, &g, j);
    }

    let order = ring.order().clone();
    while !pairs.is_empty() {
        // normal strategy: smallest lcm first (ties by indices)
        let mut best = 0;
        for k in 1..pairs.len() {
            let c = order.cmp(&pairs[k].2, &pairs[best].2);
            if c == std::cmp::Ordering::Less
                || (c == std::cmp::Ordering::Equal
                    && (pairs[k].0, pairs[k].1) < (pairs[best].0, pairs[best].1))
            {
                best = k;
            }
        }
        let (i, j, _) = pairs.swap_remove(best);
        let s = s_poly(&g[i], &g[j]);
        let r = normal_form(&s, &g);
        if !r.is_zero() {
            g.push(r.monic());
            add_pairs(&mut pairs, &g, g.len() - 1);
        }
    }

    reduce_basis(g)
}

/// Interreduces a Gröbner basis into the canonical reduced form.
fn reduce_basis(mut g: Vec<Polynomial>) -> Vec<Polynomial> {
    // minimalize: drop elements whose leading monomial is divisible by
    // another element's leading monomial
    let mut keep: Vec<Polynomial> = Vec::new();
    'cand: for i in 0..g.len() {
        let li = g[i].leading_monomial().unwrap();
        for j in 0..g.len() {
            if i == j {
                continue;
            }
            let lj = g[j].leading_monomial().unwrap();
            if lj.divides(li) && (lj != li || j < i) {
                continue 'cand;
            }
        }
        keep.push(g[i].clone());
    }
    g = keep;

    // tail-reduce to a fixed point
    loop {
        let mut changed = false;
        for i in 0..g.len() {
            let others: Vec<Polynomial> = g
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| p.clone())
                .collect();
            let r = normal_form(&g[i], &others).monic();
            if r != g[i] {
                g[i] = r;
                changed = true;
            }
        }
        g.retain(|p| !p.is_zero());
        if !changed {
            break;
        }
    }
    g.sort_by(cmp_polys);
    g
}

/// A reduced Gröbner basis together with its ring (order included).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Arc<Ring>,
    elems: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn elems(&self) -> &[Polynomial] {
        &self.elems
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        normal_form(f, &self.elems)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.elems.len() == 1 && self.elems[0].is_one()
    }
}

/// A finitely generated ideal with a lazily cached reduced basis.
///
/// The cache is write-once, so sharing an `Ideal` across threads is safe;
/// concurrent `basis()` calls race benignly (first completed result wins).
#[derive(Debug, Clone)]
pub struct Ideal {
    ring: Arc<Ring>,
    gens: Vec<Polynomial>,
    cache: OnceLock<Arc<GroebnerBasis>>,
}

impl PartialEq for Ideal {
    /// Structural equality of the presentations (not ideal equality; use
    /// [`Ideal::equal`] for that).
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.gens == other.gens
    }
}
impl Eq for Ideal {}

impl Ideal {
    pub fn new(ring: Arc<Ring>, gens: Vec<Polynomial>) -> Result<Ideal> {
        let mut moved = Vec::with_capacity(gens.len());
        for f in gens {
            if **f.ring() != *ring {
                let t = f.transfer(&ring)?;
                moved.push(t);
            } else {
                moved.push(f);
            }
        }
        moved.retain(|f| !f.is_zero());
        Ok(Ideal { ring, gens: moved, cache: OnceLock::new() })
    }

    pub fn zero(ring: Arc<Ring>) -> Ideal {
        Ideal { ring, gens: Vec::new(), cache: OnceLock::new() }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// The canonical reduced Gröbner basis (computed once, then cached).
    pub fn basis(&self) -> &GroebnerBasis {
        self.cache.get_or_init(|| {
            Arc::new(GroebnerBasis {
                ring: self.ring.clone(),
                elems: buchberger(&self.ring, &self.gens),
            })
        })
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.basis().contains(f)
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.basis().is_unit_ideal()
    }

    /// Ideal equality via reduced-basis equality (requires the same ring
    /// and order).
    pub fn equal(&self, other: &Ideal) -> Result<bool> {
        if *self.ring != *other.ring {
            return Err(Error::RingMismatch(
                "ideal comparison requires a common ring and order".into(),
            ));
        }
        Ok(self.basis().elems() == other.basis().elems())
    }

    /// The product ideal, generated by all pairwise generator products.
    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        if *self.ring != *other.ring {
            return Err(Error::RingMismatch("product of ideals in different rings".into()));
        }
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for f in &self.gens {
            for g in &other.gens {
                gens.push(f.mul(g));
            }
        }
        gens.sort_by(cmp_polys);
        gens.dedup();
        Ideal::new(self.ring.clone(), gens)
    }

    /// The sum ideal `I + J`.
    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        if *self.ring != *other.ring {
            return Err(Error::RingMismatch("sum of ideals in different rings".into()));
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(self.ring.clone(), gens)
    }

    /// Intersection with the subring avoiding `drop`: computes a basis in
    /// an elimination order and keeps the elements free of the dropped
    /// variables.  Generators of the result are expressed in `self.ring()`.
    pub fn eliminate(&self, drop: &[u32]) -> Ideal {
        let elim_ring = self.ring.with_order(self.ring.elimination_order(drop));
        let gens: Vec<Polynomial> = self
            .gens
            .iter()
            .map(|f| f.transfer(&elim_ring).expect("same frame"))
            .collect();
        let gb = buchberger(&elim_ring, &gens);
        let kept: Vec<Polynomial> = gb
            .into_iter()
            .filter(|f| f.terms().iter().all(|(m, _)| m.avoids(drop)))
            .map(|f| f.transfer(&self.ring).expect("same frame"))
            .collect();
        Ideal::new(self.ring.clone(), kept).expect("same ring")
    }

    /// Eliminates a named block of the ring.
    pub fn eliminate_block(&self, block: &str) -> Result<Ideal> {
        let b = self
            .ring
            .block_index(block)
            .ok_or_else(|| Error::Invalid(format!("no block named {block}")))?;
        Ok(self.eliminate(&self.ring.block_vars(b)))
    }

    fn fresh_tag(&self) -> String {
        let mut i = 0;
        loop {
            let name = format!("@tag{i}");
            if self.ring.var_index(&name).is_none() {
                return name;
            }
            i += 1;
        }
    }

    /// Ideal intersection via the tag-variable trick:
    /// `I ∩ J = (u·I + (1-u)·J) ∩ F[x]`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        if *self.ring != *other.ring {
            return Err(Error::RingMismatch("intersection of ideals in different rings".into()));
        }
        let tag = self.fresh_tag();
        let ext = self.ring.extended("@", &[&tag])?;
        let u_idx = ext.var_index(&tag).unwrap();
        let u = Polynomial::var(ext.clone(), u_idx);
        let one_minus_u = Polynomial::one(ext.clone()).sub(&u);
        let mut gens: Vec<Polynomial> = Vec::new();
        for f in &self.gens {
            gens.push(f.transfer(&ext)?.mul(&u));
        }
        for g in &other.gens {
            gens.push(g.transfer(&ext)?.mul(&one_minus_u));
        }
        let big = Ideal::new(ext.clone(), gens)?;
        let elim = big.eliminate(&[u_idx]);
        let back: Vec<Polynomial> = elim
            .gens()
            .iter()
            .map(|f| f.transfer(&self.ring).expect("tag variable eliminated"))
            .collect();
        Ideal::new(self.ring.clone(), back)
    }

    /// Colon ideal by one polynomial: `(I : f) = (I ∩ (f)) / f`.
    pub fn colon_poly(&self, f: &Polynomial) -> Result<Ideal> {
        if f.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let pf = Ideal::new(self.ring.clone(), vec![f.clone()])?;
        let inter = self.intersect(&pf)?;
        let gens: Vec<Polynomial> = inter
            .gens()
            .iter()
            .map(|g| exact_div(g, f).expect("member of (f) is divisible by f"))
            .collect();
        Ideal::new(self.ring.clone(), gens)
    }

    /// Saturation by one polynomial: `(I : f^∞)` via the Rabinowitsch
    /// trick (adjoin w, add w·f − 1, eliminate w).
    pub fn saturate_poly(&self, f: &Polynomial) -> Result<Ideal> {
        if f.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let tag = self.fresh_tag();
        let ext = self.ring.extended("@", &[&tag])?;
        let w_idx = ext.var_index(&tag).unwrap();
        let w = Polynomial::var(ext.clone(), w_idx);
        let mut gens: Vec<Polynomial> = Vec::new();
        for g in &self.gens {
            gens.push(g.transfer(&ext)?);
        }
        gens.push(w.mul(&f.transfer(&ext)?).sub(&Polynomial::one(ext.clone())));
        let big = Ideal::new(ext.clone(), gens)?;
        let elim = big.eliminate(&[w_idx]);
        let back: Vec<Polynomial> = elim
            .gens()
            .iter()
            .map(|g| g.transfer(&self.ring).expect("tag variable eliminated"))
            .collect();
        Ideal::new(self.ring.clone(), back)
    }

    /// True when every generator is homogeneous over `vars`.
    pub fn is_homogeneous_over(&self, vars: &[u32]) -> bool {
        self.gens.iter().all(|g| g.homogeneous_degree(vars).is_some())
    }
}
