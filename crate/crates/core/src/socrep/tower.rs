use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ConeProgram, ProgramBuilder, SocrepError};

/// A leaf value `(num/den) * var` feeding the tower.
#[derive(Clone, PartialEq, Eq)]
pub(crate) struct Leaf {
    pub var: usize,
    pub num: BigInt,
    pub den: BigInt,
}

impl Leaf {
    pub fn plain(var: usize) -> Self {
        Leaf {
            var,
            num: BigInt::one(),
            den: BigInt::one(),
        }
    }

    pub fn scaled(var: usize, mult: &BigRational) -> Self {
        Leaf {
            var,
            num: mult.numer().clone(),
            den: mult.denom().clone(),
        }
    }
}

fn to_f64(i: &BigInt) -> f64 {
    i.to_f64().expect("tower scaling fits f64")
}

/// Copy a leaf value into a fresh variable scaled by `1/scale_den`:
/// emits `scale_den * den * w = num * var`, returning `w` with
/// `w = value / scale_den`. Integer row coefficients, so exact in f64.
fn copy_into(builder: &mut ProgramBuilder, leaf: &Leaf, scale_den: i64) -> usize {
    let w = builder.new_var();
    let lhs = &leaf.den * BigInt::from(scale_den);
    builder.add_eq(&[(w, to_f64(&lhs)), (leaf.var, -to_f64(&leaf.num))], 0.0);
    w
}

/// Ben-Tal–Nemirovski tower: appends to `builder` a fragment whose
/// designated output variable `t` satisfies, for fixed leaf values
/// `x_i >= 0`: the fragment is feasible iff `t <= prod x_i^{lambda_i}`.
///
/// Construction: common denominator `q`, `2^ceil(log2 q)` leaves with
/// `p_i` of them carrying `x_i`, `q - sum p_i` carrying a slack pinned to
/// one, and `2^L - q` carrying the output itself; the leaves reduce
/// through a binary tree of rotated second-order cone blocks
/// `z^2 <= 2uv` with the pair product folded as `u = a`, `2v = b`.
pub(crate) fn add_geomean_hypograph(
    builder: &mut ProgramBuilder,
    inputs: &[Leaf],
    weights: &[BigRational],
) -> Result<usize, SocrepError> {
    if weights.is_empty() {
        return Err(SocrepError::EmptyWeights);
    }
    assert_eq!(inputs.len(), weights.len());
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(SocrepError::InvalidWeights(
            "weights must be strictly positive".into(),
        ));
    }
    let total: BigRational = weights.iter().cloned().sum();
    if total > BigRational::one() {
        return Err(SocrepError::InvalidWeights(format!(
            "weights sum to {total} > 1"
        )));
    }

    let q: BigInt = weights
        .iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let q_u64 = q.to_u64().ok_or_else(|| {
        SocrepError::InvalidWeights("weight common denominator does not fit u64".into())
    })?;
    let numerators: Vec<BigInt> = weights
        .iter()
        .map(|w| (w * BigRational::from_integer(q.clone())).to_integer())
        .collect();

    if q_u64 == 1 {
        // Single weight equal to one: the hypograph is just t <= x_1.
        return Ok(materialize(builder, &inputs[0]));
    }

    let levels = 64 - (q_u64 - 1).leading_zeros(); // ceil(log2 q)
    let n_leaves = 1u64 << levels;

    let deficit = &q - numerators.iter().sum::<BigInt>();
    let padding = n_leaves - q_u64;

    let root = builder.new_var();
    let mut layer: Vec<Leaf> = Vec::with_capacity(n_leaves as usize);
    for (leaf, p) in inputs.iter().zip(&numerators) {
        let copies = p.to_u64().expect("numerator bounded by q");
        for _ in 0..copies {
            layer.push(leaf.clone());
        }
    }
    if deficit > BigInt::zero() {
        let one = builder.pinned_one();
        for _ in 0..deficit.to_u64().expect("deficit bounded by q") {
            layer.push(Leaf::plain(one));
        }
    }
    for _ in 0..padding {
        layer.push(Leaf::plain(root));
    }
    debug_assert_eq!(layer.len() as u64, n_leaves);

    while layer.len() > 1 {
        let last_level = layer.len() == 2;
        let mut next = Vec::with_capacity(layer.len() / 2);
        for pair in layer.chunks(2) {
            let (a, b) = (&pair[0], &pair[1]);
            if a == b && !last_level {
                // z <= sqrt(a*a) collapses to the child itself.
                next.push(a.clone());
                continue;
            }
            let u = copy_into(builder, a, 1);
            let v = copy_into(builder, b, 2);
            let z = if last_level { root } else { builder.new_var() };
            builder.add_rotated(u, v, z);
            next.push(Leaf::plain(z));
        }
        layer = next;
    }
    Ok(root)
}

fn materialize(builder: &mut ProgramBuilder, leaf: &Leaf) -> usize {
    if leaf.num.is_one() && leaf.den.is_one() {
        return leaf.var;
    }
    copy_into(builder, leaf, 1)
}

/// A standalone geometric-mean hypograph fragment: designated inputs
/// `x_1..x_m >= 0` and output `t` with the fragment feasible, for fixed
/// `(x, t)`, iff `t <= prod x_i^{lambda_i}`.
#[derive(Clone, Debug)]
pub struct GeomeanFragment {
    pub program: ConeProgram,
    pub input_vars: Vec<usize>,
    pub output_var: usize,
}

/// Build the tower for the given positive rational weights (sum at most
/// 1) as a self-contained [`ConeProgram`] fragment.
pub fn geomean_tower(weights: &[BigRational]) -> Result<GeomeanFragment, SocrepError> {
    let mut builder = ProgramBuilder::new();
    let inputs = builder.new_vars(weights.len());
    builder.add_nonneg(inputs.clone());
    let leaves: Vec<Leaf> = inputs.iter().map(|&v| Leaf::plain(v)).collect();
    let hypo = add_geomean_hypograph(&mut builder, &leaves, weights)?;
    let t = builder.new_var();
    let slack = builder.new_slack();
    builder.add_eq(&[(hypo, 1.0), (t, -1.0), (slack, -1.0)], 0.0);
    Ok(GeomeanFragment {
        program: builder.finish(),
        input_vars: inputs,
        output_var: t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::rat;
    use crate::socrep::ConeBlock;

    #[test]
    fn half_half_is_single_rotated_block() {
        let frag = geomean_tower(&[rat(1, 2), rat(1, 2)]).unwrap();
        let rotated: Vec<_> = frag
            .program
            .cones
            .iter()
            .filter(|b| matches!(b, ConeBlock::RotatedSoc { .. }))
            .collect();
        assert_eq!(rotated.len(), 1, "{:#?}", frag.program.cones);
    }

    #[test]
    fn third_weights_tree_shape() {
        // q = 3: four leaves [x0, x1, x2, t], three rotated blocks.
        let frag = geomean_tower(&[rat(1, 3), rat(1, 3), rat(1, 3)]).unwrap();
        let rotated = frag
            .program
            .cones
            .iter()
            .filter(|b| matches!(b, ConeBlock::RotatedSoc { .. }))
            .count();
        assert_eq!(rotated, 3);
    }

    #[test]
    fn unit_weight_is_linear() {
        let frag = geomean_tower(&[rat(1, 1)]).unwrap();
        assert!(frag
            .program
            .cones
            .iter()
            .all(|b| matches!(b, ConeBlock::Nonneg { .. })));
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(matches!(
            geomean_tower(&[]),
            Err(SocrepError::EmptyWeights)
        ));
        assert!(matches!(
            geomean_tower(&[rat(2, 3), rat(2, 3)]),
            Err(SocrepError::InvalidWeights(_))
        ));
        assert!(matches!(
            geomean_tower(&[rat(-1, 3)]),
            Err(SocrepError::InvalidWeights(_))
        ));
    }
}
