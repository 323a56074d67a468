//! Run-time configured packs.
//!
//! [`LanePack`] carries its [`PackConfig`] with it and dispatches every
//! operation to the statically typed backend for that configuration. It is
//! what tests and tools use when the width is a command-line choice; the
//! kernels themselves are generic over [`Pack`] and never go through here.

use crate::config::PackConfig;
use crate::element::{Element, ElementKind};
use crate::error::SimdError;
use crate::pack::{Backend, FloatPack, Mask, Pack, MAX_LANES};
use crate::scalar::ScalarPack;
use crate::wide::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Min,
    Max,
    Copysign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Abs,
    Sqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompareOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReduceOp {
    Sum,
    Min,
    Max,
}

impl BinaryOp {
    /// Whether the result lanes are pure bit selections of the inputs, so that
    /// NaN payloads are reproducible.
    pub fn is_bitwise(self) -> bool {
        matches!(self, BinaryOp::Min | BinaryOp::Max | BinaryOp::Copysign)
    }

    pub const ALL: [BinaryOp; 7] = [
        BinaryOp::Add,
        BinaryOp::Sub,
        BinaryOp::Mul,
        BinaryOp::Div,
        BinaryOp::Min,
        BinaryOp::Max,
        BinaryOp::Copysign,
    ];

    fn name(self) -> &'static str {
        match self {
            BinaryOp::Add => "add",
            BinaryOp::Sub => "sub",
            BinaryOp::Mul => "mul",
            BinaryOp::Div => "div",
            BinaryOp::Min => "min",
            BinaryOp::Max => "max",
            BinaryOp::Copysign => "copysign",
        }
    }
}

impl UnaryOp {
    pub fn is_bitwise(self) -> bool {
        !matches!(self, UnaryOp::Sqrt)
    }

    pub const ALL: [UnaryOp; 3] = [UnaryOp::Neg, UnaryOp::Abs, UnaryOp::Sqrt];

    fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "neg",
            UnaryOp::Abs => "abs",
            UnaryOp::Sqrt => "sqrt",
        }
    }
}

impl CompareOp {
    pub const ALL: [CompareOp; 5] =
        [CompareOp::Lt, CompareOp::Le, CompareOp::Gt, CompareOp::Ge, CompareOp::Eq];
}

impl ReduceOp {
    pub const ALL: [ReduceOp; 3] = [ReduceOp::Sum, ReduceOp::Min, ReduceOp::Max];
}

/// One lane value of any supported kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scalar {
    F64(f64),
    F32(f32),
    I32(i32),
}

impl Scalar {
    pub fn kind(self) -> ElementKind {
        match self {
            Scalar::F64(_) => ElementKind::F64,
            Scalar::F32(_) => ElementKind::F32,
            Scalar::I32(_) => ElementKind::I32,
        }
    }

    /// Zero-extended raw bits, for bit-exact comparison.
    pub fn to_bits64(self) -> u64 {
        match self {
            Scalar::F64(x) => x.to_bits64(),
            Scalar::F32(x) => x.to_bits64(),
            Scalar::I32(x) => x.to_bits64(),
        }
    }
}

impl Scalar {
    pub fn is_nan(self) -> bool {
        match self {
            Scalar::F64(x) => x.is_nan(),
            Scalar::F32(x) => x.is_nan(),
            Scalar::I32(_) => false,
        }
    }

    /// Same bits, or both NaN.
    pub fn value_eq(self, o: Scalar) -> bool {
        self.kind() == o.kind() && (self.to_bits64() == o.to_bits64() || (self.is_nan() && o.is_nan()))
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::F64(x)
    }
}
impl From<f32> for Scalar {
    fn from(x: f32) -> Self {
        Scalar::F32(x)
    }
}
impl From<i32> for Scalar {
    fn from(x: i32) -> Self {
        Scalar::I32(x)
    }
}

#[doc(hidden)]
#[derive(Debug, Clone, Copy)]
pub enum Lanes {
    F64([f64; MAX_LANES]),
    F32([f32; MAX_LANES]),
    I32([i32; MAX_LANES]),
}

/// Element types a [`LanePack`] can hold.
pub trait Stored: Element {
    #[doc(hidden)]
    fn view(l: &Lanes) -> Option<&[Self; MAX_LANES]>;
    #[doc(hidden)]
    fn wrap(a: [Self; MAX_LANES]) -> Lanes;
    fn to_scalar(self) -> Scalar;
}

macro_rules! stored {
    ($t:ty, $v:ident) => {
        impl Stored for $t {
            fn view(l: &Lanes) -> Option<&[Self; MAX_LANES]> {
                match l {
                    Lanes::$v(a) => Some(a),
                    _ => None,
                }
            }
            fn wrap(a: [Self; MAX_LANES]) -> Lanes {
                Lanes::$v(a)
            }
            fn to_scalar(self) -> Scalar {
                Scalar::$v(self)
            }
        }
    };
}

stored!(f64, F64);
stored!(f32, F32);
stored!(i32, I32);

/// A pack whose kind, width and backend are chosen at run time.
#[derive(Debug, Clone, Copy)]
pub struct LanePack {
    cfg: PackConfig,
    lanes: Lanes,
}

/// Per-lane booleans produced by [`LanePack::compare`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LaneMask {
    cfg: PackConfig,
    bits: u32,
}

// Expands `$fb` (float kinds) or `$ib` (i32) with `$P` bound to the static
// pack type matching `$cfg`.
macro_rules! dispatch {
    ($cfg:expr, $P:ident, float => $fb:expr, int => $ib:expr) => {{
        let cfg: PackConfig = $cfg;
        match (cfg.element_kind, cfg.width, cfg.backend) {
            (ElementKind::F64, 1, Backend::ScalarReference) => { #[allow(dead_code)] type $P = ScalarPack<f64, 1>; $fb }
            (ElementKind::F64, 2, Backend::ScalarReference) => { #[allow(dead_code)] type $P = ScalarPack<f64, 2>; $fb }
            (ElementKind::F64, 4, Backend::ScalarReference) => { #[allow(dead_code)] type $P = ScalarPack<f64, 4>; $fb }
            (ElementKind::F64, 8, Backend::ScalarReference) => { #[allow(dead_code)] type $P = ScalarPack<f64, 8>; $fb }
            (ElementKind::F64, 1, Backend::WideNative) => { #[allow(dead_code)] type $P = F64x1; $fb }
            (ElementKind::F64, 2, Backend::WideNative) => { #[allow(dead_code)] type $P = F64x2; $fb }
            (ElementKind::F64, 4, Backend::WideNative) => { #[allow(dead_code)] type $P = F64x4; $fb }
            (ElementKind::F64, 8, Backend::WideNative) => { #[allow(dead_code)] type $P = F64x8; $fb }
            (ElementKind::F32, 1, Backend::ScalarReference) => { #[allow(dead_code)] type $P = ScalarPack<f32, 1>; $fb }
            (ElementKind::F32, 2, Backend::ScalarReference) => { #[allow(dead_code)] type $P = ScalarPack<f32, 2>; $fb }
            (ElementKind::F32, 4, Backend::ScalarReference) => { #[allow(dead_code)] type $P = ScalarPack<f32, 4>; $fb }
            (ElementKind::F32, 8, Backend::ScalarReference) => { #[allow(dead_code)] type $P = ScalarPack<f32, 8>; $fb }
            (ElementKind::F32, 1, Backend::WideNative) => { #[allow(dead_code)] type $P = F32x1; $fb }
            (ElementKind::F32, 2, Backend::WideNative) => { #[allow(dead_code)] type $P = F32x2; $fb }
            (ElementKind::F32, 4, Backend::WideNative) => { #[allow(dead_code)] type $P = F32x4; $fb }
            (ElementKind::F32, 8, Backend::WideNative) => { #[allow(dead_code)] type $P = F32x8; $fb }
            (ElementKind::I32, 1, Backend::ScalarReference) => { #[allow(dead_code)] type $P = ScalarPack<i32, 1>; $ib }
            (ElementKind::I32, 2, Backend::ScalarReference) => { #[allow(dead_code)] type $P = ScalarPack<i32, 2>; $ib }
            (ElementKind::I32, 4, Backend::ScalarReference) => { #[allow(dead_code)] type $P = ScalarPack<i32, 4>; $ib }
            (ElementKind::I32, 8, Backend::ScalarReference) => { #[allow(dead_code)] type $P = ScalarPack<i32, 8>; $ib }
            (ElementKind::I32, 1, Backend::WideNative) => { #[allow(dead_code)] type $P = I32x1; $ib }
            (ElementKind::I32, 2, Backend::WideNative) => { #[allow(dead_code)] type $P = I32x2; $ib }
            (ElementKind::I32, 4, Backend::WideNative) => { #[allow(dead_code)] type $P = I32x4; $ib }
            (ElementKind::I32, 8, Backend::WideNative) => { #[allow(dead_code)] type $P = I32x8; $ib }
            _ => unreachable!("unvalidated pack configuration {cfg}"),
        }
    }};
}

#[inline]
fn get<P: Pack>(l: &Lanes) -> P
where
    P::Elem: Stored,
{
    P::from_slice(P::Elem::view(l).expect("lane storage matches config"))
}

#[inline]
fn put<P: Pack>(p: P) -> Lanes
where
    P::Elem: Stored,
{
    let mut out = [P::Elem::ZERO; MAX_LANES];
    p.write_to_slice(&mut out);
    P::Elem::wrap(out)
}

#[inline]
fn mask_of<P: Pack>(bits: u32) -> P::Mask {
    let mut b = [false; MAX_LANES];
    for (i, x) in b.iter_mut().enumerate() {
        *x = bits >> i & 1 == 1;
    }
    P::Mask::from_bools(&b)
}

fn float_binary<P: FloatPack>(op: BinaryOp, a: &Lanes, b: &Lanes) -> Lanes
where
    P::Elem: Stored,
{
    let (x, y) = (get::<P>(a), get::<P>(b));
    put(match op {
        BinaryOp::Add => x + y,
        BinaryOp::Sub => x - y,
        BinaryOp::Mul => x * y,
        BinaryOp::Div => x / y,
        BinaryOp::Min => x.min(y),
        BinaryOp::Max => x.max(y),
        BinaryOp::Copysign => x.copysign(y),
    })
}

fn int_binary<P: Pack>(op: BinaryOp, a: &Lanes, b: &Lanes) -> Result<Lanes, SimdError>
where
    P::Elem: Stored,
{
    let (x, y) = (get::<P>(a), get::<P>(b));
    Ok(put(match op {
        BinaryOp::Add => x + y,
        BinaryOp::Sub => x - y,
        BinaryOp::Min => x.min(y),
        BinaryOp::Max => x.max(y),
        _ => return Err(SimdError::UnsupportedOp { op: op.name(), kind: ElementKind::I32 }),
    }))
}

fn float_unary<P: FloatPack>(op: UnaryOp, a: &Lanes) -> Lanes
where
    P::Elem: Stored,
{
    let x = get::<P>(a);
    put(match op {
        UnaryOp::Neg => -x,
        UnaryOp::Abs => x.abs(),
        UnaryOp::Sqrt => x.sqrt(),
    })
}

fn fma_of<P: FloatPack>(a: &Lanes, b: &Lanes, c: &Lanes) -> Lanes
where
    P::Elem: Stored,
{
    put(get::<P>(a).mul_add(get::<P>(b), get::<P>(c)))
}

fn compare_of<P: Pack>(op: CompareOp, a: &Lanes, b: &Lanes) -> u32
where
    P::Elem: Stored,
{
    let (x, y) = (get::<P>(a), get::<P>(b));
    match op {
        CompareOp::Lt => x.cmp_lt(y),
        CompareOp::Le => x.cmp_le(y),
        CompareOp::Gt => x.cmp_gt(y),
        CompareOp::Ge => x.cmp_ge(y),
        CompareOp::Eq => x.cmp_eq(y),
    }
    .bitmask()
}

fn select_of<P: Pack>(bits: u32, a: &Lanes, b: &Lanes) -> Lanes
where
    P::Elem: Stored,
{
    put(P::select(mask_of::<P>(bits), get::<P>(a), get::<P>(b)))
}

fn reduce_of<P: Pack>(op: ReduceOp, a: &Lanes) -> Scalar
where
    P::Elem: Stored,
{
    let x = get::<P>(a);
    match op {
        ReduceOp::Sum => x.reduce_sum(),
        ReduceOp::Min => x.reduce_min(),
        ReduceOp::Max => x.reduce_max(),
    }
    .to_scalar()
}

fn roundtrip<P: Pack>(a: &Lanes) -> Lanes
where
    P::Elem: Stored,
{
    put(get::<P>(a))
}

fn same(a: &PackConfig, b: &PackConfig) -> Result<(), SimdError> {
    if a == b {
        Ok(())
    } else {
        Err(SimdError::ConfigMismatch { left: *a, right: *b })
    }
}

fn kind_check(cfg: &PackConfig, got: ElementKind) -> Result<(), SimdError> {
    if cfg.element_kind == got {
        Ok(())
    } else {
        Err(SimdError::KindMismatch { expected: cfg.element_kind, got })
    }
}

impl LanePack {
    /// Builds a pack from explicit lane values; `lanes.len()` must equal the width.
    pub fn from_lanes<T: Stored>(lanes: &[T], cfg: PackConfig) -> Result<Self, SimdError> {
        cfg.validate()?;
        kind_check(&cfg, T::KIND)?;
        if lanes.len() != cfg.width {
            return Err(SimdError::LaneCount { expected: cfg.width, got: lanes.len() });
        }
        let mut a = [T::ZERO; MAX_LANES];
        a[..cfg.width].copy_from_slice(lanes);
        // Route through the backend so the stored lanes are what it produced.
        let raw = T::wrap(a);
        let lanes = dispatch!(cfg, P, float => roundtrip::<P>(&raw), int => roundtrip::<P>(&raw));
        Ok(Self { cfg, lanes })
    }

    pub fn splat(x: impl Into<Scalar>, cfg: PackConfig) -> Result<Self, SimdError> {
        cfg.validate()?;
        let x = x.into();
        kind_check(&cfg, x.kind())?;
        let raw = match x {
            Scalar::F64(v) => Lanes::F64([v; MAX_LANES]),
            Scalar::F32(v) => Lanes::F32([v; MAX_LANES]),
            Scalar::I32(v) => Lanes::I32([v; MAX_LANES]),
        };
        let lanes = dispatch!(cfg, P, float => splat_of::<P>(&raw), int => splat_of::<P>(&raw));
        Ok(Self { cfg, lanes })
    }

    pub fn load<T: Stored>(buf: &[T], offset: usize, cfg: PackConfig) -> Result<Self, SimdError> {
        cfg.validate()?;
        kind_check(&cfg, T::KIND)?;
        crate::pack::check_range(buf.len(), offset, cfg.width)?;
        Self::from_lanes(&buf[offset..offset + cfg.width], cfg)
    }

    /// Writes the lanes to `buf[offset..offset + W]`; nothing else is touched.
    pub fn store<T: Stored>(&self, buf: &mut [T], offset: usize) -> Result<(), SimdError> {
        kind_check(&self.cfg, T::KIND)?;
        crate::pack::check_range(buf.len(), offset, self.cfg.width)?;
        let src = T::view(&self.lanes).expect("lane storage matches config");
        buf[offset..offset + self.cfg.width].copy_from_slice(&src[..self.cfg.width]);
        Ok(())
    }

    pub fn config(&self) -> PackConfig {
        self.cfg
    }

    pub fn width(&self) -> usize {
        self.cfg.width
    }

    pub fn lane(&self, i: usize) -> Scalar {
        assert!(i < self.cfg.width, "lane {i} out of range for width {}", self.cfg.width);
        match &self.lanes {
            Lanes::F64(a) => Scalar::F64(a[i]),
            Lanes::F32(a) => Scalar::F32(a[i]),
            Lanes::I32(a) => Scalar::I32(a[i]),
        }
    }

    /// Lane values as `T`; fails if the pack holds another kind.
    pub fn to_vec<T: Stored>(&self) -> Result<Vec<T>, SimdError> {
        kind_check(&self.cfg, T::KIND)?;
        Ok(T::view(&self.lanes).expect("lane storage matches config")[..self.cfg.width].to_vec())
    }

    /// Lane-wise bit equality with another pack of the same kind and width.
    pub fn bit_eq(&self, o: &LanePack) -> bool {
        self.cfg.element_kind == o.cfg.element_kind
            && self.cfg.width == o.cfg.width
            && (0..self.cfg.width).all(|i| self.lane(i).to_bits64() == o.lane(i).to_bits64())
    }

    /// Like [`bit_eq`](Self::bit_eq) but any two NaNs count as equal.
    ///
    /// Arithmetic on NaN operands yields a NaN whose payload the compiler is
    /// free to pick (it may swap the operands of a commutative op), so only
    /// NaN-ness is reproducible for add, sub, mul, div, sqrt, fma and sums.
    pub fn value_eq(&self, o: &LanePack) -> bool {
        self.cfg.element_kind == o.cfg.element_kind
            && self.cfg.width == o.cfg.width
            && (0..self.cfg.width).all(|i| self.lane(i).value_eq(o.lane(i)))
    }

    pub fn binary(op: BinaryOp, a: &LanePack, b: &LanePack) -> Result<LanePack, SimdError> {
        same(&a.cfg, &b.cfg)?;
        let lanes = dispatch!(a.cfg, P,
            float => float_binary::<P>(op, &a.lanes, &b.lanes),
            int => int_binary::<P>(op, &a.lanes, &b.lanes)?);
        Ok(LanePack { cfg: a.cfg, lanes })
    }

    pub fn unary(op: UnaryOp, a: &LanePack) -> Result<LanePack, SimdError> {
        let lanes = dispatch!(a.cfg, P,
            float => float_unary::<P>(op, &a.lanes),
            int => return Err(SimdError::UnsupportedOp { op: op.name(), kind: ElementKind::I32 }));
        Ok(LanePack { cfg: a.cfg, lanes })
    }

    /// `a * b + c` with a single rounding per lane.
    pub fn fma(a: &LanePack, b: &LanePack, c: &LanePack) -> Result<LanePack, SimdError> {
        same(&a.cfg, &b.cfg)?;
        same(&a.cfg, &c.cfg)?;
        let lanes = dispatch!(a.cfg, P,
            float => fma_of::<P>(&a.lanes, &b.lanes, &c.lanes),
            int => return Err(SimdError::UnsupportedOp { op: "fma", kind: ElementKind::I32 }));
        Ok(LanePack { cfg: a.cfg, lanes })
    }

    pub fn compare(op: CompareOp, a: &LanePack, b: &LanePack) -> Result<LaneMask, SimdError> {
        same(&a.cfg, &b.cfg)?;
        let bits = dispatch!(a.cfg, P,
            float => compare_of::<P>(op, &a.lanes, &b.lanes),
            int => compare_of::<P>(op, &a.lanes, &b.lanes));
        Ok(LaneMask { cfg: a.cfg, bits })
    }

    pub fn select(m: &LaneMask, a: &LanePack, b: &LanePack) -> Result<LanePack, SimdError> {
        same(&a.cfg, &b.cfg)?;
        if m.cfg.width != a.cfg.width {
            return Err(SimdError::LaneCount { expected: a.cfg.width, got: m.cfg.width });
        }
        let lanes = dispatch!(a.cfg, P,
            float => select_of::<P>(m.bits, &a.lanes, &b.lanes),
            int => select_of::<P>(m.bits, &a.lanes, &b.lanes));
        Ok(LanePack { cfg: a.cfg, lanes })
    }

    /// Sum runs from lane 0 upwards; min and max follow the element NaN rule.
    pub fn reduce(op: ReduceOp, a: &LanePack) -> Scalar {
        dispatch!(a.cfg, P, float => reduce_of::<P>(op, &a.lanes), int => reduce_of::<P>(op, &a.lanes))
    }
}

fn splat_of<P: Pack>(raw: &Lanes) -> Lanes
where
    P::Elem: Stored,
{
    put(P::splat(P::Elem::view(raw).expect("kind checked")[0]))
}

impl LaneMask {
    /// Explicit construction; `bits.len()` must equal the width.
    pub fn from_bools(bits: &[bool], cfg: PackConfig) -> Result<Self, SimdError> {
        cfg.validate()?;
        if bits.len() != cfg.width {
            return Err(SimdError::LaneCount { expected: cfg.width, got: bits.len() });
        }
        let bits = bits.iter().enumerate().fold(0u32, |acc, (i, &b)| acc | (b as u32) << i);
        Ok(Self { cfg, bits })
    }

    pub fn splat(b: bool, cfg: PackConfig) -> Result<Self, SimdError> {
        cfg.validate()?;
        Ok(Self { cfg, bits: if b { crate::pack::full_bits(cfg.width) } else { 0 } })
    }

    pub fn config(&self) -> PackConfig {
        self.cfg
    }

    pub fn bitmask(&self) -> u32 {
        self.bits
    }

    pub fn test(&self, lane: usize) -> bool {
        assert!(lane < self.cfg.width, "lane {lane} out of range for width {}", self.cfg.width);
        self.bits >> lane & 1 == 1
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.cfg.width).map(|i| self.test(i)).collect()
    }

    pub fn all(&self) -> bool {
        self.bits == crate::pack::full_bits(self.cfg.width)
    }

    pub fn any(&self) -> bool {
        self.bits != 0
    }

    pub fn none(&self) -> bool {
        self.bits == 0
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f64x(w: usize) -> PackConfig {
        PackConfig::wide(ElementKind::F64, w).unwrap()
    }

    #[test]
    fn examples() {
        let c = f64x(4);
        let a = LanePack::from_lanes(&[1.0, 2.0, 3.0, 4.0], c).unwrap();
        let two = LanePack::splat(2.0, c).unwrap();
        let m = LanePack::binary(BinaryOp::Mul, &a, &two).unwrap();
        assert_eq!(m.to_vec::<f64>().unwrap(), vec![2.0, 4.0, 6.0, 8.0]);

        let sq = LanePack::from_lanes(&[4.0, 9.0, 16.0, 25.0], c).unwrap();
        let r = LanePack::unary(UnaryOp::Sqrt, &sq).unwrap();
        assert_eq!(r.to_vec::<f64>().unwrap(), vec![2.0, 3.0, 4.0, 5.0]);

        let x = LanePack::from_lanes(&[1.0, 5.0, 3.0, 3.0], c).unwrap();
        let three = LanePack::splat(3.0, c).unwrap();
        let lt = LanePack::compare(CompareOp::Lt, &x, &three).unwrap();
        assert_eq!(lt.to_bools(), vec![true, false, false, false]);

        assert_eq!(LanePack::reduce(ReduceOp::Sum, &a), Scalar::F64(10.0));

        let c2 = f64x(2);
        let f = LanePack::fma(
            &LanePack::from_lanes(&[1.0, 2.0], c2).unwrap(),
            &LanePack::from_lanes(&[3.0, 4.0], c2).unwrap(),
            &LanePack::from_lanes(&[5.0, 6.0], c2).unwrap(),
        )
        .unwrap();
        assert_eq!(f.to_vec::<f64>().unwrap(), vec![8.0, 14.0]);
    }

    #[test]
    fn mismatches_are_usage_errors() {
        let a = LanePack::splat(1.0, f64x(4)).unwrap();
        let b = LanePack::splat(1.0, f64x(2)).unwrap();
        assert!(matches!(
            LanePack::binary(BinaryOp::Add, &a, &b),
            Err(SimdError::ConfigMismatch { .. })
        ));
        let s = LanePack::splat(1.0, PackConfig::scalar(ElementKind::F64, 4).unwrap()).unwrap();
        assert!(LanePack::binary(BinaryOp::Add, &a, &s).is_err());
        let m = LaneMask::splat(true, f64x(2)).unwrap();
        assert!(LanePack::select(&m, &a, &a).is_err());
        assert!(LanePack::splat(1i32, f64x(4)).is_err());
    }

    #[test]
    fn integer_surface_is_restricted() {
        let c = PackConfig::wide(ElementKind::I32, 4).unwrap();
        let a = LanePack::from_lanes(&[1, -2, 3, i32::MAX], c).unwrap();
        let b = LanePack::splat(1i32, c).unwrap();
        let s = LanePack::binary(BinaryOp::Add, &a, &b).unwrap();
        assert_eq!(s.to_vec::<i32>().unwrap(), vec![2, -1, 4, i32::MIN]);
        for op in [BinaryOp::Mul, BinaryOp::Div, BinaryOp::Copysign] {
            assert!(matches!(
                LanePack::binary(op, &a, &b),
                Err(SimdError::UnsupportedOp { .. })
            ));
        }
        assert!(LanePack::unary(UnaryOp::Sqrt, &a).is_err());
        assert!(LanePack::fma(&a, &a, &a).is_err());
        let m = LanePack::compare(CompareOp::Le, &a, &b).unwrap();
        assert_eq!(m.to_bools(), vec![true, true, false, false]);
        assert_eq!(LanePack::reduce(ReduceOp::Min, &a), Scalar::I32(-2));
    }

    #[test]
    fn store_touches_only_its_lanes() {
        let c = f64x(2);
        let mut buf = [0.0; 4];
        LanePack::splat(7.0, c).unwrap().store(&mut buf, 1).unwrap();
        assert_eq!(buf, [0.0, 7.0, 7.0, 0.0]);
        assert!(matches!(
            LanePack::splat(7.0, c).unwrap().store(&mut buf, 3),
            Err(SimdError::OutOfBounds { .. })
        ));
        assert!(LanePack::load(&buf, 3, c).is_err());
    }

    #[test]
    fn mask_queries() {
        let c = f64x(4);
        let m = LaneMask::from_bools(&[true, false, true, false], c).unwrap();
        assert_eq!(m.count(), 2);
        assert!(LaneMask::splat(true, c).unwrap().all());
        assert!(LaneMask::splat(false, c).unwrap().none());
        assert_eq!(m.any(), !m.none());
    }
}
