//! Executes a parsed job and renders the result as JSON.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Map, Value};

use tqftkit_core::dw::{
    algebra_center_dim, brute_force_surface, dim1_partition, dw3_invariant, frobenius_partition, FiniteGroup,
    TwistedGroupAlgebra,
};
use tqftkit_core::exactnum::{recognize_eighthroot, PhaseQZ};
use tqftkit_core::groupoid::{circle_via_intervals, groupoid_cardinality};
use tqftkit_core::lattice::{approximation_tower, center_form, discriminant_form, duality_check, signature, EvenLattice};
use tqftkit_core::linalg::Matrix;
use tqftkit_core::metric::{gauss_sum, heisenberg_summary, milgram_signature, MetricGroup, HEISENBERG_LIMIT};
use tqftkit_core::tqft3::{
    fusion_is_group_law, lens_gauss_norm, modular_data, rt_invariant, verlinde_dim, SurgeryPresentation,
};
use tqftkit_core::tqft4::{partition_closed, partition_sum, partition_sum_blockwise, FourManifoldSpec, PARTITION_LIMIT};
use tqftkit_core::{Cyclo, Error, Rational, Result};

use crate::job::{CardSource, Command, JobSpec, MetricSource, Payload};

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Also run the expensive cross-checks.
    pub verify: bool,
}

/// Named invariant checks performed during a run, in execution order.
#[derive(Default)]
struct Checks(Vec<(String, bool)>);

impl Checks {
    fn push(&mut self, name: impl Into<String>, ok: bool) {
        self.0.push((name.into(), ok));
    }

    fn failures(&self) -> Vec<&str> {
        self.0.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.as_str()).collect()
    }

    fn to_json(&self) -> Value {
        Value::Object(self.0.iter().map(|(n, ok)| (n.clone(), Value::Bool(*ok))).collect())
    }
}

type Out = Map<String, Value>;

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

/// A cyclotomic value plus its `r·√m·ζ₈^s` form when it has one.
fn cyclo_json(c: &Cyclo) -> Value {
    let mut v = to_json(c);
    if let Value::Object(map) = &mut v {
        let closed = recognize_eighthroot(c).ok().map(|f| to_json(&f)).unwrap_or(Value::Null);
        map.insert("closed_form".into(), closed);
    }
    v
}

fn rational_into(out: &mut Out, r: &Rational) {
    out.insert("value".into(), json!(r.to_string()));
    out.insert("float".into(), json!(r.to_f64()));
}

fn metric_of(src: &MetricSource) -> Result<MetricGroup> {
    match src {
        MetricSource::Explicit(m) => Ok(m.clone()),
        MetricSource::Lattice(l) => discriminant_form(l),
    }
}

fn input_json(src: &MetricSource, m: &MetricGroup) -> Value {
    match src {
        MetricSource::Explicit(_) => json!({ "metric_group": m }),
        MetricSource::Lattice(l) => json!({ "lattice": { "gram": l.gram().to_rows() }, "metric_group": m }),
    }
}

fn group_json(g: &FiniteGroup) -> Value {
    json!({ "name": g.name(), "order": g.order() })
}

fn equal_mod8(a: i64, b: i64) -> bool {
    (a - b).rem_euclid(8) == 0
}

/// `Σ_x e(q(x))` element by element, without the tabulated enumeration.
fn direct_gauss_sum(m: &MetricGroup) -> Result<Cyclo> {
    let mut acc = Cyclo::zero();
    for x in m.group().elements() {
        acc = acc + Cyclo::from_phase(m.q_eval(&x)?);
    }
    Ok(acc)
}

/// Runs `job` and returns the output document. Domain errors propagate; a
/// failed check becomes [`Error::VerificationFailed`].
pub fn run_job(job: &JobSpec, opts: RunOptions) -> Result<Value> {
    let mut checks = Checks::default();
    let mut out = Out::new();
    let c = job.command;
    match &job.payload {
        Payload::Lattice(l) => lattice_info(l, opts, &mut checks, &mut out)?,
        Payload::Metric(src) => {
            let m = metric_of(src)?;
            out.insert("input".into(), input_json(src, &m));
            match c {
                Command::Gauss => gauss(&m, opts, &mut checks, &mut out)?,
                Command::Milgram => milgram(src, &m, opts, &mut checks, &mut out)?,
                _ => mtc(&m, opts, &mut checks, &mut out)?,
            }
        }
        Payload::Levels { lattice, levels } => tower(lattice, levels, c == Command::CenterCheck, &mut checks, &mut out)?,
        Payload::Verlinde { metric, genus } => verlinde(metric, *genus, opts, &mut checks, &mut out)?,
        Payload::Surgery { metric, link } => rt3(metric, link, opts, &mut checks, &mut out)?,
        Payload::FourManifold { metric, manifold } => anomaly4(metric, manifold, opts, &mut checks, &mut out)?,
        Payload::Surface { group, cocycle, genus } => {
            let algebra = match cocycle {
                Some(c) => TwistedGroupAlgebra::new(c.clone())?,
                None => TwistedGroupAlgebra::untwisted(group.clone()),
            };
            dw_surface(&algebra, *genus, opts, &mut checks, &mut out)?
        }
        Payload::Presentation { group, generators, relators } => {
            let v = dw3_invariant(group, *generators, relators)?;
            out.insert("group".into(), group_json(group));
            out.insert("generators".into(), json!(generators));
            out.insert("relators".into(), json!(relators));
            rational_into(&mut out, &v);
            let homs = &v * Rational::from_integer(BigInt::from(group.order()));
            checks.push("hom_count_is_integer", homs.is_integer());
        }
        Payload::Character { group, values } => one_dim(group, values, c == Command::Sum1, opts, &mut checks, &mut out)?,
        Payload::Cardinality(src) => cardinality(src, &mut checks, &mut out),
    }
    let failed = checks.failures();
    if !failed.is_empty() {
        return Err(Error::VerificationFailed(format!("checks failed: {}", failed.join(", "))));
    }
    out.insert("command".into(), json!(c.name()));
    out.insert("checks".into(), checks.to_json());
    out.insert("verified".into(), json!(opts.verify));
    out.insert("input_sha256".into(), json!(job.input_sha256));
    out.insert("version".into(), json!(tqftkit_core::VERSION));
    Ok(Value::Object(out))
}

fn lattice_info(l: &EvenLattice, opts: RunOptions, checks: &mut Checks, out: &mut Out) -> Result<()> {
    let sig = signature(l)?;
    let disc = discriminant_form(l)?;
    let sigma = milgram_signature(&disc)?;
    out.insert("rank".into(), json!(l.rank()));
    out.insert("gram".into(), json!(l.gram().to_rows()));
    out.insert("determinant".into(), json!(l.determinant().to_string()));
    out.insert("signature".into(), json!(sig));
    out.insert("discriminant_form".into(), to_json(&disc));
    out.insert("milgram_signature".into(), json!(sigma));
    checks.push("milgram_matches_signature_mod8", equal_mod8(sig, sigma as i64));
    checks.push("discriminant_order_is_abs_det", BigInt::from(disc.order()) == l.determinant().magnitude().clone().into());
    if opts.verify {
        let neg = milgram_signature(&discriminant_form(&l.negate())?)? as i64;
        checks.push("negated_lattice_opposite_signature", equal_mod8(neg, -sig));
    }
    Ok(())
}

fn gauss(m: &MetricGroup, opts: RunOptions, checks: &mut Checks, out: &mut Out) -> Result<()> {
    let g = gauss_sum(m);
    let nondeg = m.is_nondegenerate();
    out.insert("order".into(), json!(m.order().to_string()));
    out.insert("nondegenerate".into(), json!(nondeg));
    out.insert("gauss_sum".into(), cyclo_json(&g));
    if nondeg {
        let order = Cyclo::from_int(m.order() as i64);
        checks.push("norm_is_order", g.clone() * g.conj() == order);
    }
    if opts.verify {
        checks.push("direct_sum_agrees", direct_gauss_sum(m)? == g);
    }
    Ok(())
}

fn milgram(src: &MetricSource, m: &MetricGroup, opts: RunOptions, checks: &mut Checks, out: &mut Out) -> Result<()> {
    let sigma = milgram_signature(m)?;
    out.insert("signature".into(), json!(sigma));
    if let MetricSource::Lattice(l) = src {
        let sig = signature(l)?;
        out.insert("lattice_signature".into(), json!(sig));
        checks.push("matches_lattice_signature_mod8", equal_mod8(sig, sigma as i64));
    }
    if opts.verify {
        let neg = milgram_signature(&m.negate())? as i64;
        checks.push("negation_opposite_signature", equal_mod8(neg, -(sigma as i64)));
        let direct = direct_gauss_sum(m)?;
        let closed = tqftkit_core::exactnum::EighthRootForm::sqrt_power(m.order() as u64, 1)
            .mul(&tqftkit_core::exactnum::EighthRootForm::zeta8(sigma as i64));
        checks.push("direct_sum_equals_closed_form", direct == closed.to_cyclo());
    }
    Ok(())
}

fn mtc(m: &MetricGroup, opts: RunOptions, checks: &mut Checks, out: &mut Out) -> Result<()> {
    let data = modular_data(m)?;
    let checked = tqftkit_core::tqft3::modular_checks(m, -1);
    let n = data.rank();
    out.insert("rank".into(), json!(n));
    out.insert("central_charge".into(), json!(data.central_charge()));
    out.insert("total_dimension".into(), to_json(&data.total_dimension()));
    out.insert("elements".into(), json!(data.elements()));
    out.insert("t_phases".into(), json!((0..n).map(|x| data.t_phase(x)).collect::<Vec<PhaseQZ>>()));
    let s: Vec<Vec<PhaseQZ>> = (0..n).map(|x| (0..n).map(|y| data.s_phase(x, y)).collect()).collect();
    out.insert("s_phases".into(), json!(s));
    checks.push("s_unitary", checked.unitary);
    checks.push("s_squared_is_conjugation", checked.s_squared_is_conjugation);
    checks.push("st_cubed", checked.st_cubed);
    if opts.verify {
        checks.push("fusion_is_group_law", fusion_is_group_law(&data));
        checks.push("verlinde_genus1_is_rank", verlinde_dim(m, 1)? == BigInt::from(n));
    }
    Ok(())
}

fn tower(l: &EvenLattice, levels: &[u64], center: bool, checks: &mut Checks, out: &mut Out) -> Result<()> {
    let mut rows = Vec::new();
    for &n in levels {
        let t = approximation_tower(l, n)?;
        let dual = duality_check(&t);
        checks.push(format!("cardinalities_n{n}"), t.cardinalities_hold());
        checks.push(format!("duality_n{n}"), dual.perfect);
        let mut row = json!({
            "n": n,
            "f_order": t.f_order,
            "t_star_order": t.t_star.order().to_string(),
            "t_nf_order": t.t_nf.order().to_string(),
            "t_n_order": t.t_n.order().to_string(),
            "t_n_factors": t.t_n.group().factors(),
            "duality": to_json(&dual),
        });
        if center {
            let cf = center_form(l, n)?;
            checks.push(format!("center_perfect_n{n}"), cf.perfect());
            checks.push(format!("center_orthogonal_n{n}"), cf.orthogonal_factors());
            checks.push(format!("center_commutants_n{n}"), cf.mutual_commutants());
            checks.push(format!("center_product_bijective_n{n}"), cf.product_bijective);
            row["center"] = json!({
                "order": cf.c.order().to_string(),
                "factors": cf.c.group().factors(),
                "t_factor_order": cf.factor_t.len(),
                "f_factor_order": cf.factor_f.len(),
                "t_sign": to_json(&cf.t_sign),
                "f_sign": to_json(&cf.f_sign),
            });
        }
        rows.push(row);
    }
    out.insert("lattice".into(), json!({ "gram": l.gram().to_rows() }));
    out.insert("levels".into(), Value::Array(rows));
    Ok(())
}

fn verlinde(src: &MetricSource, genus: u32, opts: RunOptions, checks: &mut Checks, out: &mut Out) -> Result<()> {
    let m = metric_of(src)?;
    let dim = verlinde_dim(&m, genus)?;
    out.insert("input".into(), input_json(src, &m));
    out.insert("genus".into(), json!(genus));
    out.insert("dimension".into(), json!(dim.to_string()));
    checks.push("dimension_is_order_power", dim == BigInt::from(m.order()).pow(genus));
    if opts.verify {
        let size = m.order().checked_pow(2 * genus).unwrap_or(u128::MAX);
        if size <= HEISENBERG_LIMIT {
            let h = heisenberg_summary(&m, genus as usize)?;
            out.insert("heisenberg".into(), to_json(&h));
            checks.push("heisenberg_irrep_dimension", BigInt::from(h.irrep_dim) == dim);
        }
    }
    Ok(())
}

fn rt3(src: &MetricSource, link: &SurgeryPresentation, opts: RunOptions, checks: &mut Checks, out: &mut Out) -> Result<()> {
    let m = metric_of(src)?;
    let z = rt_invariant(&m, link)?;
    out.insert("input".into(), input_json(src, &m));
    out.insert("linking".into(), json!(link.linking().to_rows()));
    out.insert("link_signature".into(), json!(link.signature()));
    out.insert("z".into(), cyclo_json(&z));
    if link.components() == 1 && link.linking()[(0, 0)] != 0 {
        let order = Cyclo::from_int(m.order() as i64);
        let lhs = z.clone() * z.conj() * order.clone() * order;
        checks.push("lens_norm", lhs == lens_gauss_norm(&m, link.linking()[(0, 0)]));
    }
    if opts.verify {
        checks.push("stabilize_plus", rt_invariant(&m, &link.stabilize(1))? == z);
        checks.push("stabilize_minus", rt_invariant(&m, &link.stabilize(-1))? == z);
        let n = link.components();
        if n > 0 {
            // An elementary shear for n ≥ 2, a sign flip for n = 1.
            let e = if n >= 2 {
                Matrix::from_fn(n, n, |i, j| i64::from(i == j) + i64::from(i == 0 && j == 1))
            } else {
                Matrix::from_rows(vec![vec![-1]])
            };
            checks.push("congruence", rt_invariant(&m, &link.congruence(&e))? == z);
        }
    }
    Ok(())
}

fn anomaly4(src: &MetricSource, x: &FourManifoldSpec, opts: RunOptions, checks: &mut Checks, out: &mut Out) -> Result<()> {
    let m = metric_of(src)?;
    let closed = partition_closed(&m, x)?;
    let expanded = closed.to_cyclo();
    out.insert("input".into(), input_json(src, &m));
    out.insert(
        "manifold".into(),
        json!({ "spec": to_json(x), "b2": x.b2(), "euler": x.euler(), "signature": x.signature() }),
    );
    out.insert("exact".into(), to_json(&closed));
    match partition_sum_blockwise(&m, x) {
        Ok(sum) => {
            checks.push("sum_equals_closed_form", sum == expanded);
            out.insert("sum".into(), to_json(&sum));
        }
        Err(Error::TooLarge { .. }) => {
            out.insert("sum".into(), Value::Null);
        }
        Err(e) => return Err(e),
    }
    if opts.verify {
        let terms = m.order().checked_pow(x.b2() as u32).unwrap_or(u128::MAX);
        if terms <= PARTITION_LIMIT {
            checks.push("full_sum_equals_closed_form", partition_sum(&m, x)? == expanded);
        }
        let rev = partition_closed(&m, &x.reversed())?;
        checks.push("reversal_conjugates", rev.to_cyclo() == expanded.conj());
    }
    Ok(())
}

fn dw_surface(a: &TwistedGroupAlgebra, genus: u32, opts: RunOptions, checks: &mut Checks, out: &mut Out) -> Result<()> {
    let group = a.group();
    let z = frobenius_partition(a, genus)?;
    let center = algebra_center_dim(a);
    let twisted = !a.cocycle().is_trivial();
    out.insert("group".into(), group_json(group));
    out.insert("twisted".into(), json!(twisted));
    out.insert("genus".into(), json!(genus));
    out.insert("center_dim".into(), json!(center));
    let r = z.as_rational();
    checks.push("value_is_rational", r.is_some());
    match &r {
        Some(r) => rational_into(out, r),
        None => {
            out.insert("value".into(), cyclo_json(&z));
        }
    }
    if !twisted {
        checks.push("center_dim_is_class_count", center == group.conjugacy_classes().len());
        if opts.verify {
            let brute = brute_force_surface(group, genus as usize)?;
            checks.push("brute_force_agrees", r.as_ref() == Some(&brute));
        }
    }
    Ok(())
}

fn one_dim(g: &FiniteGroup, values: &[PhaseQZ], closure: bool, opts: RunOptions, checks: &mut Checks, out: &mut Out) -> Result<()> {
    out.insert("group".into(), group_json(g));
    out.insert("character".into(), to_json(&values));
    let dim1 = dim1_partition(g, values)?;
    if closure {
        let z = circle_via_intervals(g, values)?;
        let r = z.as_rational();
        checks.push("value_is_rational", r.is_some());
        if let Some(r) = &r {
            rational_into(out, r);
        }
        checks.push("matches_dim1", r.as_ref() == Some(&dim1));
    } else {
        rational_into(out, &dim1);
        checks.push("value_is_zero_or_one", dim1.is_zero() || dim1.is_one());
        if opts.verify {
            let z = circle_via_intervals(g, values)?;
            checks.push("circle_via_intervals_agrees", z.as_rational().as_ref() == Some(&dim1));
        }
    }
    Ok(())
}

fn cardinality(src: &CardSource, checks: &mut Checks, out: &mut Out) {
    let (value, pi) = match src {
        CardSource::Groupoid { group, set, groupoid } => {
            out.insert("groupoid".into(), json!({ "group": group, "set": set, "objects": groupoid.objects() }));
            let v = groupoid.cardinality();
            let expected = Rational::new(BigInt::from(groupoid.objects()), BigInt::from(groupoid.group().order()));
            checks.push("objects_over_group_order", v == expected);
            (v, groupoid.pi_tower())
        }
        CardSource::Tower(t) => (groupoid_cardinality(t), t.clone()),
    };
    out.insert("components".into(), json!(pi.components()));
    rational_into(out, &value);
    checks.push("positive", value > Rational::zero());
}
