//! Sparse monomials and monomial orders.
//!
//! A [`Monomial`] stores `(variable, exponent)` pairs sorted by variable
//! index, so it is independent of any ambient ring and survives ring
//! extensions (appending variables never renumbers existing ones).
//!
//! An [`Order`] is a total order on monomials compatible with
//! multiplication and with `1` as minimum.  Three kinds are provided:
//! graded reverse lexicographic, lexicographic, and block elimination
//! (front block compared first by grevlex, ties broken by grevlex on the
//! remaining variables).

use std::cmp::Ordering;
use std::fmt;

/// A power product of variables, stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    /// `(variable index, exponent)` pairs, sorted by variable, exponents > 0.
    exps: Vec<(u32, u32)>,
}

impl Monomial {
    /// The empty power product `1`.
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    /// The single variable `v`.
    pub fn var(v: u32) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    /// `v^e` (the unit monomial when `e = 0`).
    pub fn var_pow(v: u32, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial { exps: vec![(v, e)] }
        }
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs.
    pub fn from_pairs(pairs: &[(u32, u32)]) -> Self {
        let mut exps: Vec<(u32, u32)> = pairs.iter().copied().filter(|&(_, e)| e > 0).collect();
        exps.sort_by_key(|&(v, _)| v);
        let mut merged: Vec<(u32, u32)> = Vec::with_capacity(exps.len());
        for (v, e) in exps {
            match merged.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { exps: merged }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.exps
    }

    /// Exponent of variable `v` (0 if absent).
    pub fn exp(&self, v: u32) -> u32 {
        match self.exps.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(i) => self.exps[i].1,
            Err(_) => 0,
        }
    }

    /// Total degree over all variables.
    pub fn deg(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    /// Total degree over the given variables.
    pub fn deg_over(&self, vars: &[u32]) -> u32 {
        self.exps
            .iter()
            .filter(|&&(v, _)| vars.contains(&v))
            .map(|&(_, e)| e)
            .sum()
    }

    /// True when every variable with a positive exponent lies in `vars`.
    pub fn supported_on(&self, vars: &[u32]) -> bool {
        self.exps.iter().all(|&(v, _)| vars.contains(&v))
    }

    /// True when no variable of `vars` occurs.
    pub fn avoids(&self, vars: &[u32]) -> bool {
        self.exps.iter().all(|&(v, _)| !vars.contains(&v))
    }

    /// Variables with positive exponent.
    pub fn vars(&self) -> impl Iterator<Item = u32> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            match self.exps[i].0.cmp(&other.exps[j].0) {
                Ordering::Less => {
                    out.push(self.exps[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.exps[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.exps[i].0, self.exps[i].1 + other.exps[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.exps[i..]);
        out.extend_from_slice(&other.exps[j..]);
        Monomial { exps: out }
    }

    /// Exact quotient `self / other`, if `other` divides `self`.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.exps.len());
        let mut j = 0;
        for &(v, e) in &self.exps {
            let mut rem = e;
            while j < other.exps.len() && other.exps[j].0 < v {
                return None; // divisor has a variable we lack
            }
            if j < other.exps.len() && other.exps[j].0 == v {
                if other.exps[j].1 > e {
                    return None;
                }
                rem = e - other.exps[j].1;
                j += 1;
            }
            if rem > 0 {
                out.push((v, rem));
            }
        }
        if j < other.exps.len() {
            return None;
        }
        Some(Monomial { exps: out })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        other.try_div(self).is_some()
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            match self.exps[i].0.cmp(&other.exps[j].0) {
                Ordering::Less => {
                    out.push(self.exps[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.exps[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.exps[i].0, self.exps[i].1.max(other.exps[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.exps[i..]);
        out.extend_from_slice(&other.exps[j..]);
        Monomial { exps: out }
    }

    /// True when the supports are disjoint.
    pub fn coprime(&self, other: &Monomial) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            match self.exps[i].0.cmp(&other.exps[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }

    /// Renames variables through `map` (old index → new index).
    pub fn remap(&self, map: &dyn Fn(u32) -> u32) -> Monomial {
        Monomial::from_pairs(
            &self
                .exps
                .iter()
                .map(|&(v, e)| (map(v), e))
                .collect::<Vec<_>>(),
        )
    }
}

/// Which comparison scheme an [`Order`] uses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderKind {
    /// Graded reverse lexicographic over the whole priority list.
    GrevLex,
    /// Lexicographic along the priority list.
    Lex,
    /// Elimination order: grevlex on `front`, ties by grevlex on the rest.
    Block { front: Vec<u32> },
}

/// A monomial order: a kind plus a variable priority list
/// (most significant first; every comparable variable must appear).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Order {
    pub kind: OrderKind,
    pub priority: Vec<u32>,
}

fn grevlex_cmp(a: &Monomial, b: &Monomial, vars: &[u32]) -> Ordering {
    let da: u32 = vars.iter().map(|&v| a.exp(v)).sum();
    let db: u32 = vars.iter().map(|&v| b.exp(v)).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    // Reverse-lex tie break: scanning least significant variables first,
    // the first difference decides, smaller exponent meaning larger monomial.
    for &v in vars.iter().rev() {
        let (ea, eb) = (a.exp(v), b.exp(v));
        match ea.cmp(&eb) {
            Ordering::Equal => {}
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

fn lex_cmp(a: &Monomial, b: &Monomial, vars: &[u32]) -> Ordering {
    for &v in vars {
        match a.exp(v).cmp(&b.exp(v)) {
            Ordering::Equal => {}
            ord => return ord,
        }
    }
    Ordering::Equal
}

impl Order {
    pub fn grevlex(priority: Vec<u32>) -> Self {
        Order { kind: OrderKind::GrevLex, priority }
    }

    pub fn lex(priority: Vec<u32>) -> Self {
        Order { kind: OrderKind::Lex, priority }
    }

    /// Elimination order with `front` compared first; `priority` lists all
    /// variables (front ones included) most significant first.
    pub fn block(front: Vec<u32>, priority: Vec<u32>) -> Self {
        Order { kind: OrderKind::Block { front }, priority }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match &self.kind {
            OrderKind::GrevLex => grevlex_cmp(a, b, &self.priority),
            OrderKind::Lex => lex_cmp(a, b, &self.priority),
            OrderKind::Block { front } => {
                let first = grevlex_cmp(a, b, front);
                if first != Ordering::Equal {
                    return first;
                }
                let rest: Vec<u32> = self
                    .priority
                    .iter()
                    .copied()
                    .filter(|v| !front.contains(v))
                    .collect();
                grevlex_cmp(a, b, &rest)
            }
        }
    }
}

/// All monomials of total degree `d` in the given variables, sorted
/// descending under `order` (leading monomial first).
pub fn monomials_of_degree(vars: &[u32], d: u32, order: &Order) -> Vec<Monomial> {
    fn rec(vars: &[u32], d: u32, acc: &mut Vec<(u32, u32)>, out: &mut Vec<Monomial>) {
        if vars.len() == 1 {
            let mut pairs = acc.clone();
            if d > 0 {
                pairs.push((vars[0], d));
            }
            out.push(Monomial::from_pairs(&pairs));
            return;
        }
        for e in (0..=d).rev() {
            if e > 0 {
                acc.push((vars[0], e));
            }
            rec(&vars[1..], d - e, acc, out);
            if e > 0 {
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    if vars.is_empty() {
        if d == 0 {
            out.push(Monomial::one());
        }
        return out;
    }
    rec(vars, d, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| order.cmp(b, a));
    out
}

impl fmt::Display for Monomial {
    /// Debug-ish display with bare variable indices; rings render names.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exps
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    format!("#{v}")
                } else {
                    format!("#{v}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(pairs: &[(u32, u32)]) -> Monomial {
        Monomial::from_pairs(pairs)
    }

    #[test]
    fn arithmetic() {
        let xy = m(&[(0, 1), (1, 1)]);
        let x2 = m(&[(0, 2)]);
        assert_eq!(xy.mul(&x2), m(&[(0, 3), (1, 1)]));
        assert_eq!(xy.lcm(&x2), m(&[(0, 2), (1, 1)]));
        assert_eq!(m(&[(0, 3), (1, 1)]).try_div(&xy), Some(m(&[(0, 2)])));
        assert_eq!(x2.try_div(&xy), None);
        assert!(m(&[(0, 1)]).coprime(&m(&[(1, 2)])));
        assert!(!xy.coprime(&x2));
    }

    #[test]
    fn grevlex_two_vars() {
        // degree first, then reverse-lex: x0^2 > x0*x1 > x1^2 > x0 > x1 > 1
        let ord = Order::grevlex(vec![0, 1]);
        let seq = [
            m(&[(0, 2)]),
            m(&[(0, 1), (1, 1)]),
            m(&[(1, 2)]),
            m(&[(0, 1)]),
            m(&[(1, 1)]),
            Monomial::one(),
        ];
        for w in seq.windows(2) {
            assert_eq!(ord.cmp(&w[0], &w[1]), Ordering::Greater);
        }
    }

    #[test]
    fn grevlex_three_vars_classic() {
        // x*z < y^2 in grevlex(x > y > z)
        let ord = Order::grevlex(vec![0, 1, 2]);
        let xz = m(&[(0, 1), (2, 1)]);
        let y2 = m(&[(1, 2)]);
        assert_eq!(ord.cmp(&y2, &xz), Ordering::Greater);
        // but x*z > y^2 in lex
        let lex = Order::lex(vec![0, 1, 2]);
        assert_eq!(lex.cmp(&xz, &y2), Ordering::Greater);
    }

    #[test]
    fn block_order_eliminates_front() {
        // with front {2}: any monomial containing #2 beats any without
        let ord = Order::block(vec![2], vec![2, 0, 1]);
        let t = m(&[(2, 1)]);
        let x5 = m(&[(0, 5)]);
        assert_eq!(ord.cmp(&t, &x5), Ordering::Greater);
    }

    #[test]
    fn order_compatible_with_multiplication() {
        let ord = Order::grevlex(vec![0, 1, 2]);
        let a = m(&[(0, 1), (1, 2)]);
        let b = m(&[(2, 3)]);
        let c = m(&[(0, 2), (2, 1)]);
        assert_eq!(ord.cmp(&a, &b), ord.cmp(&a.mul(&c), &b.mul(&c)));
        assert_eq!(ord.cmp(&Monomial::one(), &a), Ordering::Less);
    }

    #[test]
    fn basis_enumeration_counts() {
        let ord = Order::grevlex(vec![0, 1, 2]);
        // C(d + n, n) monomials of degree d in n+1 variables
        assert_eq!(monomials_of_degree(&[0, 1, 2], 3, &ord).len(), 10);
        assert_eq!(monomials_of_degree(&[0, 1], 1, &ord).len(), 2);
        assert_eq!(monomials_of_degree(&[0], 4, &ord).len(), 1);
        assert_eq!(monomials_of_degree(&[0, 1], 0, &ord), vec![Monomial::one()]);
        // first element is the leading one: x0^3
        assert_eq!(
            monomials_of_degree(&[0, 1, 2], 3, &ord)[0],
            m(&[(0, 3)])
        );
    }
}
