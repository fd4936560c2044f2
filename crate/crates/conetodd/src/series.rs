//! Truncated multivariate power series and pole-cleared meromorphic forms.
//!
//! A [`TruncSeries`] carries an explicit trusted `order`: every stored
//! coefficient of total degree `<= order` is exact, and nothing of higher
//! degree is stored. Operations propagate the trusted order conservatively;
//! multiplying by an exact linear form raises it by one, which is what makes
//! the order budget of the meromorphic recursion work out: a
//! [`PoleCleared`] form with numerator trusted to `M + (number of its
//! denominators)` can always be joined with others and finally divided down
//! to an honest order-`M` series.

use std::collections::BTreeMap;
use std::sync::{LazyLock, Mutex};

use num_traits::{One, Signed, Zero};

use crate::ratlin::{primitive, qvec_is_zero, IVec, Int, QMat, QVec, Rat};
use crate::{Error, Result};

/// Exponent vector with graded-lexicographic order (total degree first,
/// then lexicographic).
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Expo(pub Vec<u32>);

impl Expo {
    pub fn zero(nvars: usize) -> Self {
        Expo(vec![0; nvars])
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Expo {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Expo {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Coefficient vector of an exact linear form `<xi, v>`.
pub type LinForm = QVec;

static BERNOULLI: LazyLock<Mutex<Vec<Rat>>> =
    LazyLock::new(|| Mutex::new(vec![Rat::one()]));

/// The n-th Bernoulli number with the convention `B_1 = -1/2`; values are
/// cached process-wide (append-only, extended at most once per index).
pub fn bernoulli(n: usize) -> Rat {
    let mut cache = BERNOULLI.lock().unwrap();
    while cache.len() <= n {
        let m = cache.len();
        // B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j
        let mut acc = Rat::zero();
        let mut binom = Int::one(); // C(m+1, 0)
        for (j, bj) in cache.iter().enumerate().take(m) {
            acc += Rat::from_integer(binom.clone()) * bj;
            // C(m+1, j+1) = C(m+1, j) * (m+1-j) / (j+1)
            binom = binom * Int::from(m + 1 - j) / Int::from(j + 1);
        }
        let val = -acc / Rat::from_integer(Int::from(m + 1));
        cache.push(val);
    }
    cache[n].clone()
}

/// Sparse truncated power series: exact coefficients for all total degrees
/// `<= order`, nothing stored beyond.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    nvars: usize,
    order: u32,
    terms: BTreeMap<Expo, Rat>,
}

impl TruncSeries {
    pub fn zero(nvars: usize, order: u32) -> Self {
        TruncSeries {
            nvars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat, order: u32) -> Self {
        let mut s = TruncSeries::zero(nvars, order);
        if !c.is_zero() {
            s.terms.insert(Expo::zero(nvars), c);
        }
        s
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        TruncSeries::constant(nvars, Rat::one(), order)
    }

    /// The linear form `<xi, v>` as a degree-one series.
    pub fn linform(v: &[Rat], order: u32) -> Self {
        let mut s = TruncSeries::zero(v.len(), order);
        if order == 0 {
            return s;
        }
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0u32; v.len()];
                e[i] = 1;
                s.terms.insert(Expo(e), c.clone());
            }
        }
        s
    }

    pub fn from_terms(
        nvars: usize,
        order: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, Rat)>,
    ) -> Result<Self> {
        let mut s = TruncSeries::zero(nvars, order);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::SeriesShape(format!(
                    "exponent width {} does not match {} variables",
                    e.len(),
                    nvars
                )));
            }
            let e = Expo(e);
            if e.total() > order || c.is_zero() {
                continue;
            }
            let entry = s.terms.entry(e).or_insert_with(Rat::zero);
            *entry += c;
        }
        s.prune();
        Ok(s)
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Iterate terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Rat {
        self.terms
            .get(&Expo(e.to_vec()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&vec![0; self.nvars])
    }

    /// Human-readable form like `1/2 - 1/12 x1 + 1/720 x1^3`, terms in
    /// graded-lex order; `0` for the zero series.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for (e, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            let mag = if c.numer().is_negative() { -c } else { c.clone() };
            if out.is_empty() {
                if c.numer().is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.numer().is_negative() { " - " } else { " + " });
            }
            let mut monomial = String::new();
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !monomial.is_empty() {
                    monomial.push(' ');
                }
                monomial.push_str(&format!("x{}", i + 1));
                if k > 1 {
                    monomial.push_str(&format!("^{k}"));
                }
            }
            if monomial.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&monomial);
            } else {
                out.push_str(&format!("{mag} {monomial}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn truncate(&self, order: u32) -> TruncSeries {
        let mut out = self.clone();
        out.order = order.min(self.order);
        out.terms.retain(|e, _| e.total() <= out.order);
        out
    }

    fn check_vars(&self, other: &TruncSeries) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::SeriesShape(format!(
                "variable counts differ: {} vs {}",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_vars(other)?;
        let order = self.order.min(other.order);
        let mut out = self.truncate(order);
        for (e, c) in other.terms.iter() {
            if e.total() > order {
                continue;
            }
            let entry = out.terms.entry(e.clone()).or_insert_with(Rat::zero);
            *entry += c;
        }
        out.prune();
        Ok(out)
    }

    pub fn neg(&self) -> TruncSeries {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rat) -> TruncSeries {
        if r.is_zero() {
            return TruncSeries::zero(self.nvars, self.order);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= r;
        }
        out
    }

    /// Product, trusted to the minimum of the two orders.
    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_vars(other)?;
        let order = self.order.min(other.order);
        let mut terms: BTreeMap<Expo, Rat> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            let da = ea.total();
            if da > order {
                continue;
            }
            for (eb, cb) in &other.terms {
                if da + eb.total() > order {
                    continue;
                }
                let e = Expo(
                    ea.0.iter()
                        .zip(&eb.0)
                        .map(|(x, y)| x + y)
                        .collect::<Vec<_>>(),
                );
                let entry = terms.entry(e).or_insert_with(Rat::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(TruncSeries {
            nvars: self.nvars,
            order,
            terms,
        })
    }

    /// Product with an exact linear form; the trusted order increases by
    /// one, because degree-`k+1` coefficients of the product only involve
    /// degree-`k` coefficients of `self`.
    pub fn mul_linform(&self, v: &[Rat]) -> Result<TruncSeries> {
        self.mul_linform_capped(v, self.order + 1)
    }

    fn mul_linform_capped(&self, v: &[Rat], cap: u32) -> Result<TruncSeries> {
        if v.len() != self.nvars {
            return Err(Error::SeriesShape(format!(
                "linear form width {} does not match {} variables",
                v.len(),
                self.nvars
            )));
        }
        let order = (self.order + 1).min(cap);
        let mut terms: BTreeMap<Expo, Rat> = BTreeMap::new();
        for (e, c) in &self.terms {
            if e.total() + 1 > order {
                continue;
            }
            for (i, vi) in v.iter().enumerate() {
                if vi.is_zero() {
                    continue;
                }
                let mut en = e.0.clone();
                en[i] += 1;
                let entry = terms.entry(Expo(en)).or_insert_with(Rat::zero);
                *entry += c * vi;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(TruncSeries {
            nvars: self.nvars,
            order,
            terms,
        })
    }

    /// `exp(<xi, v>)`, exact through `order`.
    pub fn exp_linform(v: &[Rat], order: u32) -> TruncSeries {
        let nvars = v.len();
        let mut acc = TruncSeries::one(nvars, order);
        let mut pow = TruncSeries::one(nvars, order);
        let mut fact = Rat::one();
        for k in 1..=order as usize {
            pow = pow
                .mul_linform_capped(v, order)
                .expect("shape checked");
            if pow.is_zero() {
                break;
            }
            fact *= Rat::from_integer(Int::from(k));
            acc = acc.add(&pow.scale(&fact.recip())).expect("same vars");
        }
        acc
    }

    /// The series of `t / (1 - e^t)` evaluated at `t = <xi, v>`, exact
    /// through `order`. Its coefficient sequence in one variable starts
    /// `-1, 1/2, -1/12, 0, 1/720, ...`.
    pub fn todd_one_var(v: &[Rat], order: u32) -> TruncSeries {
        let nvars = v.len();
        let mut acc = TruncSeries::zero(nvars, order);
        let mut pow = TruncSeries::one(nvars, order);
        let mut fact = Rat::one();
        for k in 0..=order as usize {
            if k > 0 {
                pow = pow
                    .mul_linform_capped(v, order)
                    .expect("shape checked");
                fact *= Rat::from_integer(Int::from(k));
                if pow.is_zero() {
                    break;
                }
            }
            let coeff = -bernoulli(k) / &fact;
            if !coeff.is_zero() {
                acc = acc.add(&pow.scale(&coeff)).expect("same vars");
            }
        }
        acc
    }

    /// Substitute each variable by a linear form in new variables:
    /// `result(u) = self(x)` with `x_i = <rows[i], u>`. `rows` must have
    /// `self.nvars()` rows; the result has `rows.cols()` variables and the
    /// same trusted order (linear substitution preserves total degree).
    pub fn subst_linear(&self, rows: &QMat) -> Result<TruncSeries> {
        if rows.rows() != self.nvars {
            return Err(Error::SeriesShape(format!(
                "substitution matrix has {} rows, series has {} variables",
                rows.rows(),
                self.nvars
            )));
        }
        let new_nvars = rows.cols();
        let order = self.order;
        let mut pow_cache: Vec<Vec<TruncSeries>> = (0..self.nvars)
            .map(|_| vec![TruncSeries::one(new_nvars, order)])
            .collect();
        let mut acc = TruncSeries::zero(new_nvars, order);
        for (e, c) in &self.terms {
            let mut term = TruncSeries::constant(new_nvars, c.clone(), order);
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let row = rows.row(i);
                while pow_cache[i].len() <= k as usize {
                    let next = pow_cache[i]
                        .last()
                        .unwrap()
                        .mul_linform_capped(&row, order)?;
                    pow_cache[i].push(next);
                }
                term = term.mul(&pow_cache[i][k as usize])?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Exact division by a linear form. Errors with the lowest offending
    /// total degree if the series is not divisible. The result's trusted
    /// order drops by one.
    pub fn div_linform(&self, v: &[Rat]) -> Result<TruncSeries> {
        if v.len() != self.nvars {
            return Err(Error::SeriesShape(format!(
                "linear form width {} does not match {} variables",
                v.len(),
                self.nvars
            )));
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return Err(Error::ZeroVector);
        };
        if self.order == 0 {
            return Err(Error::InsufficientOrder {
                required: 1,
                available: 0,
            });
        }
        let n = self.nvars;
        // Fast path: the form is a multiple of a single variable.
        if v.iter().enumerate().all(|(i, x)| i == p || x.is_zero()) {
            let mut terms: BTreeMap<Expo, Rat> = BTreeMap::new();
            let mut offending: Option<u32> = None;
            for (e, c) in &self.terms {
                if e.0[p] == 0 {
                    offending = Some(match offending {
                        None => e.total(),
                        Some(d) => d.min(e.total()),
                    });
                    continue;
                }
                let mut en = e.0.clone();
                en[p] -= 1;
                terms.insert(Expo(en), c / &v[p]);
            }
            if let Some(degree) = offending {
                return Err(Error::NotDivisible { degree });
            }
            return Ok(TruncSeries {
                nvars: n,
                order: self.order - 1,
                terms,
            });
        }
        // Shear so the form becomes the pivot variable: in new coordinates
        // u_p = <xi, v> and u_j = xi_j for j != p.
        let mut fwd = QMat::identity(n);
        for (j, c) in v.iter().enumerate() {
            fwd[(p, j)] = c.clone();
        }
        let mut bwd = QMat::identity(n);
        for j in 0..n {
            if j == p {
                bwd[(p, p)] = v[p].recip();
            } else {
                bwd[(p, j)] = -&v[j] / &v[p];
            }
        }
        let sheared = self.subst_linear(&bwd)?;
        let mut terms: BTreeMap<Expo, Rat> = BTreeMap::new();
        let mut offending: Option<u32> = None;
        for (e, c) in &sheared.terms {
            if e.0[p] == 0 {
                offending = Some(match offending {
                    None => e.total(),
                    Some(d) => d.min(e.total()),
                });
                continue;
            }
            let mut en = e.0.clone();
            en[p] -= 1;
            terms.insert(Expo(en), c.clone());
        }
        if let Some(degree) = offending {
            return Err(Error::NotDivisible { degree });
        }
        let quotient_sheared = TruncSeries {
            nvars: n,
            order: self.order - 1,
            terms,
        };
        quotient_sheared.subst_linear(&fwd)
    }

    /// Coefficientwise equality through total degree `through`; both series
    /// must be trusted at least that far.
    pub fn eq_through(&self, other: &TruncSeries, through: u32) -> Result<bool> {
        self.check_vars(other)?;
        let available = self.order.min(other.order);
        if available < through {
            return Err(Error::InsufficientOrder {
                required: through,
                available,
            });
        }
        Ok(self.first_difference(other, through).is_none())
    }

    /// First differing coefficient (graded-lex) through the given degree.
    pub fn first_difference(
        &self,
        other: &TruncSeries,
        through: u32,
    ) -> Option<(Expo, Rat, Rat)> {
        let mut keys: Vec<&Expo> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .filter(|e| e.total() <= through)
            .collect();
        keys.sort();
        keys.dedup();
        for e in keys {
            let a = self.coeff(&e.0);
            let b = other.coeff(&e.0);
            if a != b {
                return Some((e.clone(), a, b));
            }
        }
        None
    }
}

/// Canonical denominator: a primitive integer linear form whose first
/// nonzero coefficient is positive. Lexicographic `Ord` on the coefficient
/// vector gives the multiset a canonical sorted representation.
pub type CanonForm = IVec;

fn canonicalize_form(v: &[Rat]) -> Result<(CanonForm, Rat)> {
    if qvec_is_zero(v) {
        return Err(Error::ZeroVector);
    }
    let prim = primitive(v)?;
    let i = prim.iter().position(|x| !x.is_zero()).unwrap();
    let mut prim = prim;
    // factor: v = factor * prim, so 1/<xi,v> = (1/factor) * 1/<xi,prim>.
    let mut factor = &v[i] / Rat::from_integer(prim[i].clone());
    if prim[i].is_negative() {
        for x in prim.iter_mut() {
            *x = -x.clone();
        }
        factor = -factor;
    }
    Ok((prim, factor))
}

fn canon_to_linform(f: &CanonForm) -> LinForm {
    f.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

/// A meromorphic germ at the origin presented with its poles cleared:
/// `scale * numerator / prod(<xi, d> for d in denoms)`.
///
/// Invariant: the numerator's trusted order is at least
/// `target order + denoms.len()` for whatever target the form was built
/// for, so joining and extracting below never silently lose precision.
#[derive(Clone, Debug)]
pub struct PoleCleared {
    nvars: usize,
    scale: Rat,
    numerator: TruncSeries,
    /// Canonical forms, sorted; a multiset.
    denoms: Vec<CanonForm>,
}

impl PoleCleared {
    pub fn new(
        scale: Rat,
        numerator: TruncSeries,
        raw_denoms: &[LinForm],
    ) -> Result<PoleCleared> {
        let nvars = numerator.nvars();
        let mut denoms = Vec::with_capacity(raw_denoms.len());
        let mut scale = scale;
        for d in raw_denoms {
            if d.len() != nvars {
                return Err(Error::SeriesShape(format!(
                    "denominator width {} does not match {} variables",
                    d.len(),
                    nvars
                )));
            }
            let (canon, factor) = canonicalize_form(d)?;
            scale /= factor;
            denoms.push(canon);
        }
        denoms.sort();
        Ok(PoleCleared {
            nvars,
            scale,
            numerator,
            denoms,
        })
    }

    /// A plain series viewed as a pole-free form.
    pub fn from_series(s: TruncSeries) -> PoleCleared {
        PoleCleared {
            nvars: s.nvars(),
            scale: Rat::one(),
            numerator: s,
            denoms: Vec::new(),
        }
    }

    pub fn zero(nvars: usize, order: u32) -> PoleCleared {
        PoleCleared::from_series(TruncSeries::zero(nvars, order))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn scale(&self) -> &Rat {
        &self.scale
    }

    pub fn numerator(&self) -> &TruncSeries {
        &self.numerator
    }

    pub fn denoms(&self) -> &[CanonForm] {
        &self.denoms
    }

    pub fn negate(&self) -> PoleCleared {
        let mut out = self.clone();
        out.scale = -out.scale;
        out
    }

    pub fn scale_by(&self, r: &Rat) -> PoleCleared {
        let mut out = self.clone();
        out.scale *= r;
        out
    }

    /// Multiply the numerator by a plain series (e.g. a germ pulled back
    /// from a quotient).
    pub fn mul_series(&self, s: &TruncSeries) -> Result<PoleCleared> {
        Ok(PoleCleared {
            nvars: self.nvars,
            scale: self.scale.clone(),
            numerator: self.numerator.mul(s)?,
            denoms: self.denoms.clone(),
        })
    }

    /// Multiply by an exact linear form; the trusted order rises by one.
    pub fn times_linform(&self, v: &[Rat]) -> Result<PoleCleared> {
        Ok(PoleCleared {
            nvars: self.nvars,
            scale: self.scale.clone(),
            numerator: self.numerator.mul_linform(v)?,
            denoms: self.denoms.clone(),
        })
    }

    /// Bring all terms over the common denominator: the multiset maximum of
    /// the individual denominators. Each numerator is multiplied by its
    /// missing linear forms (raising its trusted order accordingly) and the
    /// scales are folded in.
    pub fn join(terms: &[PoleCleared]) -> Result<PoleCleared> {
        let Some(first) = terms.first() else {
            return Err(Error::SeriesShape("join of no terms".into()));
        };
        let nvars = first.nvars;
        for t in terms {
            if t.nvars != nvars {
                return Err(Error::SeriesShape(
                    "join of forms with different variable counts".into(),
                ));
            }
        }
        // Multiset maximum of denominators.
        let mut union: Vec<(CanonForm, usize)> = Vec::new();
        for t in terms {
            let mut counts: BTreeMap<&CanonForm, usize> = BTreeMap::new();
            for d in &t.denoms {
                *counts.entry(d).or_insert(0) += 1;
            }
            for (d, c) in counts {
                match union.iter_mut().find(|(u, _)| u == d) {
                    Some((_, uc)) => *uc = (*uc).max(c),
                    None => union.push((d.clone(), c)),
                }
            }
        }
        let mut denoms: Vec<CanonForm> = Vec::new();
        for (d, c) in &union {
            for _ in 0..*c {
                denoms.push(d.clone());
            }
        }
        denoms.sort();

        let mut acc: Option<TruncSeries> = None;
        for t in terms {
            // Missing forms: union minus this term's denominators.
            let mut missing: Vec<&CanonForm> = Vec::new();
            {
                let mut have: BTreeMap<&CanonForm, usize> = BTreeMap::new();
                for d in &t.denoms {
                    *have.entry(d).or_insert(0) += 1;
                }
                for (d, c) in &union {
                    let h = have.get(d).copied().unwrap_or(0);
                    for _ in h..*c {
                        missing.push(d);
                    }
                }
            }
            let mut num = t.numerator.scale(&t.scale);
            for m in missing {
                num = num.mul_linform(&canon_to_linform(m))?;
            }
            acc = Some(match acc {
                None => num,
                Some(a) => a.add(&num)?,
            });
        }
        Ok(PoleCleared {
            nvars,
            scale: Rat::one(),
            numerator: acc.unwrap(),
            denoms,
        })
    }

    pub fn sub(&self, other: &PoleCleared) -> Result<PoleCleared> {
        PoleCleared::join(&[self.clone(), other.negate()])
    }

    /// Divide the numerator by every denominator, producing an honest
    /// series of trusted order at least `target_order`. Errors if the
    /// numerator's order cannot support the division (order budget breach)
    /// or if some division has a remainder (the germ has a genuine pole).
    pub fn extract_holomorphic(&self, target_order: u32) -> Result<TruncSeries> {
        let required = target_order + self.denoms.len() as u32;
        if self.numerator.order() < required {
            return Err(Error::InsufficientOrder {
                required,
                available: self.numerator.order(),
            });
        }
        let mut num = self.numerator.truncate(required);
        for d in &self.denoms {
            num = num.div_linform(&canon_to_linform(d))?;
        }
        Ok(num.scale(&self.scale).truncate(target_order))
    }

    /// Check that the form vanishes identically through `target_order`:
    /// the joined numerator must vanish through
    /// `target_order + denoms.len()`. Returns the first failing coefficient
    /// on failure.
    pub fn vanishes_through(
        &self,
        target_order: u32,
    ) -> Result<std::result::Result<(), (Expo, Rat)>> {
        let required = target_order + self.denoms.len() as u32;
        if self.numerator.order() < required {
            return Err(Error::InsufficientOrder {
                required,
                available: self.numerator.order(),
            });
        }
        if self.scale.is_zero() {
            return Ok(Ok(()));
        }
        for (e, c) in self.numerator.terms() {
            if e.total() <= required && !c.is_zero() {
                return Ok(Err((e.clone(), c * &self.scale)));
            }
        }
        Ok(Ok(()))
    }

    /// Equality of meromorphic germs through `target_order`, reported with
    /// the first failing coefficient of the cross-multiplied difference.
    pub fn eq_through(
        &self,
        other: &PoleCleared,
        target_order: u32,
    ) -> Result<std::result::Result<(), (Expo, Rat)>> {
        self.sub(other)?.vanishes_through(target_order)
    }
}
