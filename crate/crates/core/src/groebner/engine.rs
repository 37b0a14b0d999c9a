//! Buchberger's algorithm on submodules of R^r with the Gebauer–Möller
//! criteria, sugar pair selection, and optional tracking of every basis
//! element as a combination of the input generators.

use crate::poly::{Monomial, Polynomial};
use crate::scalar::Scalar;

use super::vector::{ModuleOrder, Vector};

struct Elem {
    v: Vector,
    rep: Option<Vector>,
    sugar: u32,
}

impl Elem {
    fn lead(&self) -> (&Monomial, usize) {
        let t = self.v.leading().expect("basis elements are nonzero");
        (&t.0, t.1)
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    pos: usize,
    sugar: u32,
}

/// Output of the engine: a reduced basis, sorted by leading term, and the
/// representation of each element in terms of the inputs when tracked.
pub(crate) struct Basis {
    pub elems: Vec<Vector>,
    pub reps: Option<Vec<Vector>>,
}

struct Engine {
    ord: ModuleOrder,
    product_criterion: bool,
    store: Vec<Elem>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

/// Representation vectors live in R^s (s = number of inputs) and only need a
/// consistent order for merging.
const REP_ORDER: ModuleOrder = ModuleOrder::TermOverPosition;

impl Engine {
    fn find_reducer(&self, m: &Monomial, pos: usize, skip: Option<usize>) -> Option<usize> {
        self.active.iter().copied().find(|&k| {
            Some(k) != skip && {
                let (lm, lp) = self.store[k].lead();
                lp == pos && lm.divides(m)
            }
        })
    }

    /// Reduces `e` by the active set; with `full` the tail is reduced too.
    fn reduce(&self, mut e: Elem, full: bool, skip: Option<usize>) -> Elem {
        let mut done = Vec::new();
        while let Some((m, pos, c)) = e.v.leading().cloned() {
            match self.find_reducer(&m, pos, skip) {
                Some(k) => {
                    let g = &self.store[k];
                    let t = g.lead().0.quotient_of(&m);
                    // basis elements are monic
                    e.v = e.v.sub_scaled(&c, &t, &g.v, self.ord);
                    if let (Some(r), Some(gr)) = (e.rep.as_mut(), g.rep.as_ref()) {
                        *r = r.sub_scaled(&c, &t, gr, REP_ORDER);
                    }
                    e.sugar = e.sugar.max(g.sugar + t.degree());
                }
                None if full => done.push(e.v.terms.pop().unwrap()),
                None => break,
            }
        }
        if full {
            done.reverse();
            e.v.terms = done;
        }
        e
    }

    fn make_monic(e: &mut Elem) {
        let lc = e.v.leading().unwrap().2.clone();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero leading coefficient");
            e.v = e.v.scale(&inv);
            if let Some(r) = e.rep.as_mut() {
                *r = r.scale(&inv);
            }
        }
    }

    fn insert(&mut self, mut e: Elem) {
        Self::make_monic(&mut e);
        let h = self.store.len();
        self.store.push(e);
        self.update(h);
    }

    fn update(&mut self, h: usize) {
        let (th, ph) = {
            let (m, p) = self.store[h].lead();
            (m.clone(), p)
        };
        let cand: Vec<(usize, Monomial, bool)> = self
            .active
            .iter()
            .copied()
            .filter(|&g| self.store[g].lead().1 == ph)
            .map(|g| {
                let tg = self.store[g].lead().0;
                (g, th.lcm(tg), self.product_criterion && th.is_coprime(tg))
            })
            .collect();
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        for (idx, (g, l, coprime)) in cand.iter().enumerate() {
            let dominated = cand[idx + 1..].iter().any(|(_, l2, _)| l2.divides(l))
                || kept.iter().any(|(_, l2, _)| l2.divides(l));
            if *coprime || !dominated {
                kept.push((*g, l.clone(), *coprime));
            }
        }
        let fresh: Vec<Pair> = kept
            .into_iter()
            .filter(|(_, _, coprime)| !coprime)
            .map(|(g, l, _)| {
                let sugar = self.pair_sugar(g, h, &l);
                Pair {
                    i: g,
                    j: h,
                    lcm: l,
                    pos: ph,
                    sugar,
                }
            })
            .collect();
        let store = &self.store;
        self.pairs.retain(|p| {
            !(p.pos == ph
                && th.divides(&p.lcm)
                && store[p.i].lead().0.lcm(&th) != p.lcm
                && store[p.j].lead().0.lcm(&th) != p.lcm)
        });
        self.pairs.extend(fresh);
        self.active.retain(|&g| {
            let (tg, pg) = store[g].lead();
            !(pg == ph && th.divides(tg))
        });
        self.active.push(h);
    }

    fn pair_sugar(&self, i: usize, j: usize, lcm: &Monomial) -> u32 {
        let s = |k: usize| {
            let e = &self.store[k];
            e.sugar + lcm.degree() - e.lead().0.degree()
        };
        s(i).max(s(j))
    }

    fn s_vector(&self, p: &Pair) -> Elem {
        let (a, b) = (&self.store[p.i], &self.store[p.j]);
        let ta = a.lead().0.quotient_of(&p.lcm);
        let tb = b.lead().0.quotient_of(&p.lcm);
        let neg = Scalar::from_int(-1);
        let v = Vector::zero()
            .sub_scaled(&neg, &ta, &a.v, self.ord)
            .sub_scaled(&Scalar::one(), &tb, &b.v, self.ord);
        let rep = match (&a.rep, &b.rep) {
            (Some(ra), Some(rb)) => Some(
                Vector::zero()
                    .sub_scaled(&neg, &ta, ra, REP_ORDER)
                    .sub_scaled(&Scalar::one(), &tb, rb, REP_ORDER),
            ),
            _ => None,
        };
        Elem {
            v,
            rep,
            sugar: p.sugar,
        }
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let ord = self.ord;
        let best = (0..self.pairs.len()).min_by(|&x, &y| {
            let (a, b) = (&self.pairs[x], &self.pairs[y]);
            a.sugar
                .cmp(&b.sugar)
                .then_with(|| ord.cmp((&a.lcm, a.pos), (&b.lcm, b.pos)))
        })?;
        Some(self.pairs.swap_remove(best))
    }
}

pub(crate) fn buchberger(
    gens: Vec<Vector>,
    nvars: usize,
    ord: ModuleOrder,
    product_criterion: bool,
    track: bool,
) -> Basis {
    let mut eng = Engine {
        ord,
        product_criterion,
        store: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    let mut inputs: Vec<(usize, Vector)> = gens
        .into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .collect();
    inputs.sort_by(|a, b| {
        let (x, y) = (a.1.leading().unwrap(), b.1.leading().unwrap());
        ord.cmp((&x.0, x.1), (&y.0, y.1))
    });
    for (k, v) in inputs {
        let sugar = v.max_degree();
        let e = Elem {
            v,
            rep: track.then(|| Vector::unit(nvars, k)),
            sugar,
        };
        let e = eng.reduce(e, false, None);
        if !e.v.is_zero() {
            eng.insert(e);
        }
    }
    while let Some(p) = eng.next_pair() {
        let s = eng.s_vector(&p);
        let r = eng.reduce(s, false, None);
        if !r.v.is_zero() {
            eng.insert(r);
        }
    }
    // interreduce the minimal basis
    let mut active = eng.active.clone();
    active.sort_by(|&a, &b| {
        let (x, y) = (eng.store[a].lead(), eng.store[b].lead());
        ord.cmp(x, y)
    });
    let mut elems = Vec::with_capacity(active.len());
    let mut reps = Vec::with_capacity(active.len());
    for &k in &active {
        let e = &eng.store[k];
        let tail = Elem {
            v: e.v.clone(),
            rep: e.rep.clone(),
            sugar: e.sugar,
        };
        let r = eng.reduce_tail(tail, k);
        elems.push(r.v);
        reps.push(r.rep);
    }
    Basis {
        elems,
        reps: track.then(|| reps.into_iter().map(Option::unwrap).collect()),
    }
}

impl Engine {
    /// Reduces every non-leading term of a basis element by the other active elements.
    fn reduce_tail(&self, mut e: Elem, own: usize) -> Elem {
        let lead = e.v.terms.pop().unwrap();
        let rest = Elem {
            v: std::mem::replace(&mut e.v, Vector::zero()),
            rep: e.rep.take(),
            sugar: e.sugar,
        };
        let mut r = self.reduce(rest, true, Some(own));
        r.v.terms.push(lead);
        r
    }
}

/// Full division of `v` by a reduced basis; returns the remainder and the
/// polynomial quotient attached to each basis element.
pub(crate) fn divide(
    v: &Vector,
    basis: &[Vector],
    nvars: usize,
    ord: ModuleOrder,
) -> (Vector, Vec<Polynomial>) {
    let mut rem = v.clone();
    let mut done = Vec::new();
    let mut quot: Vec<Vec<(Monomial, Scalar)>> = vec![Vec::new(); basis.len()];
    while let Some((m, pos, c)) = rem.leading().cloned() {
        let hit = basis.iter().position(|g| {
            let l = g.leading().unwrap();
            l.1 == pos && l.0.divides(&m)
        });
        match hit {
            Some(k) => {
                let l = basis[k].leading().unwrap();
                let t = l.0.quotient_of(&m);
                let q = if l.2.is_one() { c } else { &c / &l.2 };
                rem = rem.sub_scaled(&q, &t, &basis[k], ord);
                quot[k].push((t, q));
            }
            None => done.push(rem.terms.pop().unwrap()),
        }
    }
    done.reverse();
    rem.terms = done;
    (
        rem,
        quot.into_iter()
            .map(|q| Polynomial::from_terms(nvars, q))
            .collect(),
    )
}
