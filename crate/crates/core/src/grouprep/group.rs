use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::RepError;
use crate::exactalg::{RingSpec, SUPPORTED_PRIMES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    SL2,
    GL2,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::SL2 => write!(f, "SL2"),
            GroupKind::GL2 => write!(f, "GL2"),
        }
    }
}

impl std::str::FromStr for GroupKind {
    type Err = RepError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "SL2" => Ok(GroupKind::SL2),
            "GL2" => Ok(GroupKind::GL2),
            _ => Err(RepError::Catalog(format!("unknown group kind {s:?}"))),
        }
    }
}

/// A 2x2 matrix `[[a, b], [c, d]]` over `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elem(pub [u32; 4]);

impl Elem {
    pub fn new(a: u32, b: u32, c: u32, d: u32) -> Self {
        Elem([a, b, c, d])
    }

    pub fn rows(&self) -> [[u32; 2]; 2] {
        let [a, b, c, d] = self.0;
        [[a, b], [c, d]]
    }
}

#[derive(Clone, Debug)]
pub struct Subgroup {
    pub name: String,
    pub generators: Vec<Elem>,
    pub elements: Vec<Elem>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// `SL_2(F_p)` or `GL_2(F_p)`, fully enumerated, with a shortest word in the
/// fixed generators for every element.
#[derive(Debug)]
pub struct GroupData {
    kind: GroupKind,
    p: u32,
    elements: Vec<Elem>,
    index: HashMap<Elem, usize>,
    generators: Vec<Elem>,
    words: Vec<Vec<usize>>,
}

impl GroupData {
    pub fn build(kind: GroupKind, p: u32) -> Result<Self, RepError> {
        if !SUPPORTED_PRIMES.contains(&p) {
            return Err(RepError::UnsupportedPrime(p));
        }
        let mut generators = vec![Elem::new(1, 1, 0, 1), Elem::new(1, 0, 1, 1)];
        let zeta = RingSpec::field(p)?.primitive_root();
        if kind == GroupKind::GL2 && zeta != 1 {
            generators.push(Elem::new(zeta, 0, 0, 1));
        }
        let mut g = GroupData {
            kind,
            p,
            elements: Vec::new(),
            index: HashMap::new(),
            generators,
            words: Vec::new(),
        };
        // breadth-first closure from the identity, multiplying on the right
        let id = g.identity();
        g.index.insert(id, 0);
        g.elements.push(id);
        g.words.push(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (k, &s) in g.generators.clone().iter().enumerate() {
                let h = g.mul(g.elements[i], s);
                if !g.index.contains_key(&h) {
                    let mut w = g.words[i].clone();
                    w.push(k);
                    g.index.insert(h, g.elements.len());
                    g.elements.push(h);
                    g.words.push(w);
                    queue.push_back(g.elements.len() - 1);
                }
            }
        }
        let expected = match kind {
            GroupKind::SL2 => (p * (p * p - 1)) as usize,
            GroupKind::GL2 => ((p * p - 1) * (p * p - p)) as usize,
        };
        assert_eq!(g.elements.len(), expected, "generators must produce the whole group");
        Ok(g)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn field(&self) -> RingSpec {
        RingSpec::field(self.p).expect("supported prime")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn index_of(&self, g: &Elem) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &Elem) -> bool {
        self.index.contains_key(g)
    }

    /// Shortest word (generator indices, left to right) for the element.
    pub fn word(&self, g: &Elem) -> Option<&[usize]> {
        self.index_of(g).map(|i| self.words[i].as_slice())
    }

    pub fn identity(&self) -> Elem {
        Elem::new(1, 0, 0, 1)
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        let p = self.p;
        let [a, b, c, d] = x.0;
        let [e, f, g, h] = y.0;
        Elem::new((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)
    }

    pub fn det(&self, x: Elem) -> u32 {
        let p = self.p;
        let [a, b, c, d] = x.0;
        (a * d + p * p - (b * c) % p) % p
    }

    pub fn inv(&self, x: Elem) -> Elem {
        let p = self.p;
        let di = self.field().inv(self.det(x)).expect("group elements are invertible");
        let [a, b, c, d] = x.0;
        let neg = |v: u32| (p - v % p) % p;
        Elem::new(d * di % p, neg(b) * di % p, neg(c) * di % p, a * di % p)
    }

    pub fn pow(&self, x: Elem, k: u64) -> Elem {
        let mut out = self.identity();
        for _ in 0..k {
            out = self.mul(out, x);
        }
        out
    }

    pub fn conj(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `[[1, 1], [0, 1]]`, generator of the upper unipotent subgroup.
    pub fn nbar(&self) -> Elem {
        Elem::new(1, 1, 0, 1)
    }

    /// `[[1, 0], [1, 1]]`, generator of the lower unipotent subgroup.
    pub fn nbar_prime(&self) -> Elem {
        Elem::new(1, 0, 1, 1)
    }

    /// `[[0, 1], [-1, 0]]`.
    pub fn w0(&self) -> Elem {
        Elem::new(0, 1, self.p - 1, 0)
    }

    /// `diag(z, z^{-1})` for the smallest primitive root `z`; generates the
    /// determinant-one torus.
    pub fn torus_generator(&self) -> Elem {
        let f = self.field();
        let z = f.primitive_root();
        Elem::new(z, 0, 0, f.inv(z).expect("unit"))
    }

    fn closure(&self, name: &str, gens: Vec<Elem>) -> Subgroup {
        let mut elements = vec![self.identity()];
        let mut i = 0;
        while i < elements.len() {
            for s in &gens {
                let h = self.mul(elements[i], *s);
                if !elements.contains(&h) {
                    elements.push(h);
                }
            }
            i += 1;
        }
        elements.sort();
        Subgroup { name: name.to_string(), generators: gens, elements }
    }

    pub fn subgroup(&self, name: &str, gens: Vec<Elem>) -> Subgroup {
        self.closure(name, gens)
    }

    pub fn upper_unipotent(&self) -> Subgroup {
        self.closure("N", vec![self.nbar()])
    }

    pub fn lower_unipotent(&self) -> Subgroup {
        self.closure("N'", vec![self.nbar_prime()])
    }

    pub fn torus(&self) -> Subgroup {
        let f = self.field();
        let z = f.primitive_root();
        let gens = match self.kind {
            GroupKind::SL2 => vec![self.torus_generator()],
            GroupKind::GL2 => vec![Elem::new(z, 0, 0, 1), Elem::new(1, 0, 0, z)],
        };
        self.closure("T", gens)
    }

    pub fn borel(&self) -> Subgroup {
        let mut gens = self.torus().generators;
        gens.push(self.nbar());
        self.closure("B", gens)
    }

    /// The conjugates of the lower unipotent subgroup other than the upper one.
    pub fn other_unipotent_radicals(&self) -> Vec<Subgroup> {
        let n = self.upper_unipotent();
        let mut seen: Vec<Vec<Elem>> = vec![n.elements.clone()];
        let mut out = Vec::new();
        for &g in &self.elements {
            let gen = self.conj(g, self.nbar_prime());
            let s = self.closure("conjugate of N'", vec![gen]);
            if !seen.contains(&s.elements) {
                seen.push(s.elements.clone());
                out.push(s);
            }
        }
        out
    }
}
