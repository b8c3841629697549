//! Table-driven arithmetic in GF(2^r), 1 ≤ r ≤ 16.
//!
//! Elements are stored as their polynomial-basis index: bit `i` of the index is
//! the coefficient of `x^i` modulo the field's modulus polynomial. Addition is
//! XOR; multiplication and division go through log/antilog tables built once
//! per [`FieldSpec`] and shared through [`Field::new`]'s cache.
//!
//! The module also carries the subfield machinery used by field descent:
//! [`Embedding`] fixes a deterministic copy of GF(2^s) inside GF(2^r), and
//! provides the relative trace and the trace Gram matrix of a basis.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Documented modulus for each supported degree. Bit `i` is the coefficient of `x^i`.
///
/// GF(4): x²+x+1, GF(8): x³+x+1, GF(16): x⁴+x+1, GF(64): x⁶+x+1,
/// GF(256): x⁸+x⁴+x³+x²+1. The rest are standard primitive trinomials and
/// pentanomials.
pub const STANDARD_MODULI: [u32; 17] = [
    0,       // unused
    0b11,    // x + 1
    0b111,   // x^2 + x + 1
    0b1011,  // x^3 + x + 1
    0b10011, // x^4 + x + 1
    0b100101,
    0b1000011,
    0x83,
    0x11D,
    0x211,
    0x409,
    0x805,
    0x1053,
    0x201B,
    0x4443,
    0x8003,
    0x1100B,
];

/// A field element: its polynomial-basis index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gf(pub u16);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> u32 {
        self.0 as u32
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Degree and modulus polynomial of a binary extension field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub degree: u32,
    pub modulus: u32,
}

impl FieldSpec {
    /// The spec with the documented modulus for `degree`.
    pub fn standard(degree: u32) -> Result<Self> {
        if !(1..=16).contains(&degree) {
            return Err(Error::UnsupportedDegree(degree));
        }
        Ok(FieldSpec {
            degree,
            modulus: STANDARD_MODULI[degree as usize],
        })
    }

    /// A spec with a caller-chosen modulus, checked for irreducibility.
    pub fn with_modulus(degree: u32, modulus: u32) -> Result<Self> {
        if !(1..=16).contains(&degree) {
            return Err(Error::UnsupportedDegree(degree));
        }
        if poly_degree(modulus) != Some(degree) || !is_irreducible(modulus) {
            return Err(Error::ReducibleModulus { degree, modulus });
        }
        Ok(FieldSpec { degree, modulus })
    }

    pub fn size(&self) -> u32 {
        1 << self.degree
    }

    fn check_same(&self, other: &FieldSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.degree,
                left_mod: self.modulus,
                right: other.degree,
                right_mod: other.modulus,
            })
        }
    }
}

fn poly_degree(p: u32) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(31 - p.leading_zeros())
    }
}

fn poly_mod(mut a: u32, b: u32) -> u32 {
    let db = poly_degree(b).expect("nonzero divisor");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree at most half the degree of `p`.
pub fn is_irreducible(p: u32) -> bool {
    let Some(d) = poly_degree(p) else {
        return false;
    };
    if d == 0 {
        return false;
    }
    for divisor in 2u32..(1 << (d / 2 + 1)) {
        if poly_degree(divisor).unwrap() > d / 2 {
            break;
        }
        if poly_mod(p, divisor) == 0 {
            return false;
        }
    }
    true
}

/// Log/antilog tables for one field.
pub struct Field {
    spec: FieldSpec,
    /// exp[i] = g^i for 0 ≤ i < 2(q−1).
    exp: Vec<Gf>,
    /// log[a] for a ≠ 0; log[0] is unused.
    log: Vec<u32>,
    generator: Gf,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("degree", &self.spec.degree)
            .field("modulus", &format_args!("{:#x}", self.spec.modulus))
            .field("generator", &self.generator)
            .finish()
    }
}

static FIELD_CACHE: OnceLock<Mutex<HashMap<FieldSpec, Arc<Field>>>> = OnceLock::new();

impl Field {
    /// Shared tables for `spec`, built on first use.
    pub fn new(spec: FieldSpec) -> Result<Arc<Field>> {
        let cache = FIELD_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&spec) {
            return Ok(f.clone());
        }
        let spec = FieldSpec::with_modulus(spec.degree, spec.modulus)?;
        let field = Arc::new(Self::build(spec));
        cache.lock().unwrap().entry(spec).or_insert(field.clone());
        Ok(field)
    }

    /// GF(2^degree) with the documented modulus.
    pub fn standard(degree: u32) -> Result<Arc<Field>> {
        Self::new(FieldSpec::standard(degree)?)
    }

    fn build(spec: FieldSpec) -> Field {
        let q = spec.size();
        let order = q - 1;
        let mulx = |a: u32| {
            let b = a << 1;
            if b & q != 0 {
                b ^ spec.modulus
            } else {
                b
            }
        };
        // Shift-and-add multiply, used only while searching for a generator.
        let slow_mul = |mut a: u32, mut b: u32| {
            let mut acc = 0;
            while b != 0 {
                if b & 1 != 0 {
                    acc ^= a;
                }
                a = mulx(a);
                b >>= 1;
            }
            acc
        };
        let generator = (1..q)
            .find(|&g| {
                let mut acc = g;
                let mut k = 1;
                while acc != 1 {
                    acc = slow_mul(acc, g);
                    k += 1;
                }
                k == order
            })
            .expect("the multiplicative group of a finite field is cyclic");

        let mut exp = vec![Gf::ZERO; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut acc = 1u32;
        for i in 0..order {
            exp[i as usize] = Gf(acc as u16);
            exp[(i + order) as usize] = Gf(acc as u16);
            log[acc as usize] = i;
            acc = slow_mul(acc, generator);
        }
        Field {
            spec,
            exp,
            log,
            generator: Gf(generator as u16),
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn degree(&self) -> u32 {
        self.spec.degree
    }

    /// Number of elements q.
    pub fn size(&self) -> u32 {
        self.spec.size()
    }

    /// The multiplicative generator the tables are built on.
    pub fn generator(&self) -> Gf {
        self.generator
    }

    pub fn same_as(&self, other: &Field) -> Result<()> {
        self.spec.check_same(&other.spec)
    }

    pub fn element(&self, index: u32) -> Result<Gf> {
        if index < self.size() {
            Ok(Gf(index as u16))
        } else {
            Err(Error::ElementOutOfRange {
                index,
                size: self.size(),
            })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Gf> {
        (0..self.size()).map(|i| Gf(i as u16))
    }

    #[inline]
    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        Gf(a.0 ^ b.0)
    }

    #[inline]
    pub fn sub(&self, a: Gf, b: Gf) -> Gf {
        Gf(a.0 ^ b.0)
    }

    /// Additive inverse; the identity in characteristic 2.
    #[inline]
    pub fn neg(&self, a: Gf) -> Gf {
        a
    }

    #[inline]
    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a.0 == 0 || b.0 == 0 {
            return Gf::ZERO;
        }
        self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize]
    }

    pub fn inv(&self, a: Gf) -> Result<Gf> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero(self.size()));
        }
        let order = self.size() - 1;
        Ok(self.exp[((order - self.log[a.0 as usize]) % order) as usize])
    }

    pub fn div(&self, a: Gf, b: Gf) -> Result<Gf> {
        let binv = self.inv(b)?;
        Ok(self.mul(a, binv))
    }

    pub fn pow(&self, a: Gf, e: u64) -> Gf {
        if e == 0 {
            return Gf::ONE;
        }
        if a.0 == 0 {
            return Gf::ZERO;
        }
        let order = (self.size() - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (e % order)) % order;
        self.exp[l as usize]
    }

    /// g^e for the table generator g.
    pub fn exp(&self, e: u64) -> Gf {
        let order = (self.size() - 1) as u64;
        self.exp[(e % order) as usize]
    }

    /// Discrete log to the table generator; `None` for zero.
    pub fn log(&self, a: Gf) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.0 as usize])
    }

    /// Absolute trace to GF(2), as a bit.
    pub fn absolute_trace(&self, a: Gf) -> Gf {
        let mut acc = Gf::ZERO;
        let mut t = a;
        for _ in 0..self.degree() {
            acc = self.add(acc, t);
            t = self.mul(t, t);
        }
        acc
    }
}

/// A field element tagged with its field, for checked arithmetic across
/// API boundaries.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<Field>,
    value: Gf,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF({})", self.value.0, self.field.size())
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.spec == other.field.spec && self.value == other.value
    }
}

impl Eq for FieldElement {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Div,
}

impl FieldElement {
    pub fn new(field: &Arc<Field>, index: u32) -> Result<Self> {
        Ok(FieldElement {
            value: field.element(index)?,
            field: field.clone(),
        })
    }

    pub fn value(&self) -> Gf {
        self.value
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
}

/// Checked arithmetic on tagged elements.
pub fn field_arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    a.field.same_as(&b.field)?;
    let f = &a.field;
    let value = match op {
        ArithOp::Add => f.add(a.value, b.value),
        ArithOp::Mul => f.mul(a.value, b.value),
        ArithOp::Div => f.div(a.value, b.value)?,
    };
    Ok(FieldElement {
        field: f.clone(),
        value,
    })
}

/// A fixed copy of a subfield GF(q) inside GF(q^m).
///
/// The image of the subfield's `x` is the first power
/// `g^(k·(Q−1)/(q−1))`, k = 1, 2, …, of the big field's generator that is a
/// root of the subfield modulus. Every other subfield element is mapped
/// through its polynomial-basis expansion in that root.
#[derive(Clone)]
pub struct Embedding {
    big: Arc<Field>,
    small: Arc<Field>,
    image: Vec<Gf>,
    preimage: HashMap<Gf, Gf>,
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Embedding(GF({}) -> GF({}))",
            self.small.size(),
            self.big.size()
        )
    }
}

impl Embedding {
    pub fn new(big: &Arc<Field>, small: &Arc<Field>) -> Result<Self> {
        let (r, s) = (big.degree(), small.degree());
        if r % s != 0 {
            return Err(Error::NotASubfield { small: s, big: r });
        }
        let big_order = (big.size() - 1) as u64;
        let step = big_order / (small.size() - 1) as u64;
        let modulus = small.spec().modulus;
        let is_root = |z: Gf| {
            let mut acc = Gf::ZERO;
            for bit in (0..=s).rev() {
                acc = big.mul(acc, z);
                if modulus >> bit & 1 == 1 {
                    acc = big.add(acc, Gf::ONE);
                }
            }
            acc.is_zero()
        };
        let root = (1..=(small.size() - 1) as u64)
            .map(|k| big.exp(k * step))
            .find(|&z| is_root(z))
            .ok_or(Error::NotASubfield { small: s, big: r })?;

        let mut powers = Vec::with_capacity(s as usize);
        let mut p = Gf::ONE;
        for _ in 0..s {
            powers.push(p);
            p = big.mul(p, root);
        }
        let image: Vec<Gf> = small
            .elements()
            .map(|u| {
                (0..s)
                    .filter(|&i| u.0 >> i & 1 == 1)
                    .fold(Gf::ZERO, |acc, i| big.add(acc, powers[i as usize]))
            })
            .collect();
        let preimage = image
            .iter()
            .enumerate()
            .map(|(i, &b)| (b, Gf(i as u16)))
            .collect();
        Ok(Embedding {
            big: big.clone(),
            small: small.clone(),
            image,
            preimage,
        })
    }

    pub fn big(&self) -> &Arc<Field> {
        &self.big
    }

    pub fn small(&self) -> &Arc<Field> {
        &self.small
    }

    /// Extension degree m = [GF(q^m) : GF(q)].
    pub fn extension_degree(&self) -> u32 {
        self.big.degree() / self.small.degree()
    }

    pub fn embed(&self, a: Gf) -> Gf {
        self.image[a.0 as usize]
    }

    /// The subfield element equal to `b`, if `b` lies in the subfield.
    pub fn restrict(&self, b: Gf) -> Option<Gf> {
        self.preimage.get(&b).copied()
    }

    /// Relative trace Σ_{i<m} x^{q^i}, returned as a subfield element.
    pub fn trace(&self, x: Gf) -> Gf {
        let q = self.small.size() as u64;
        let mut acc = Gf::ZERO;
        let mut t = x;
        for _ in 0..self.extension_degree() {
            acc = self.big.add(acc, t);
            t = self.big.pow(t, q);
        }
        self.restrict(acc)
            .expect("relative trace lands in the subfield")
    }

    /// All big-field elements spanned over the subfield by `basis`, indexed by
    /// their coordinate vector in mixed radix (coordinate 0 least significant).
    /// Fails when the span has fewer than q^m elements.
    pub fn coordinate_table(&self, basis: &[Gf]) -> Result<Vec<Vec<Gf>>> {
        let m = self.extension_degree() as usize;
        if basis.len() != m {
            return Err(Error::LengthMismatch(basis.len(), m));
        }
        let q = self.small.size() as usize;
        let total = self.big.size() as usize;
        let mut table: Vec<Option<Vec<Gf>>> = vec![None; total];
        let mut coords = vec![Gf::ZERO; m];
        for counter in 0..total {
            let mut rest = counter;
            for c in coords.iter_mut() {
                *c = Gf((rest % q) as u16);
                rest /= q;
            }
            let value = coords
                .iter()
                .zip(basis)
                .fold(Gf::ZERO, |acc, (&c, &a)| {
                    self.big.add(acc, self.big.mul(self.embed(c), a))
                });
            let slot = &mut table[value.0 as usize];
            if slot.is_some() {
                return Err(Error::DependentBasis);
            }
            *slot = Some(coords.clone());
        }
        Ok(table.into_iter().map(|c| c.unwrap()).collect())
    }

    /// M_ij = Tr(α_i α_j). The basis is checked for independence first and
    /// the result for invertibility.
    pub fn gram_matrix(&self, basis: &[Gf]) -> Result<Vec<Vec<Gf>>> {
        self.coordinate_table(basis)?;
        let gram: Vec<Vec<Gf>> = basis
            .iter()
            .map(|&a| {
                basis
                    .iter()
                    .map(|&b| self.trace(self.big.mul(a, b)))
                    .collect()
            })
            .collect();
        if linalg::inverse(&self.small, &gram).is_none() {
            return Err(Error::SingularGram);
        }
        Ok(gram)
    }
}

/// Relative trace of `x` in `embedding.big()` down to `embedding.small()`.
pub fn trace_to_base(x: Gf, embedding: &Embedding) -> Gf {
    embedding.trace(x)
}
