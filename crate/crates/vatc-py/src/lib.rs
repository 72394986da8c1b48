//! Python bindings for the twisted conjugacy toolkit.
//!
//! Group elements cross the boundary as `(vector, coset)` tuples, e.g.
//! `([1, -2], 1)`; canonical forms come back the same way, so a form is
//! directly usable as a representative element of its class.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use vatc::group::{GroupElement, VAGroupData};
use vatc::growth::{
    beta_series, bfs_ball, check_generates, class_series, fr_series, quotient_series, slope_fit,
    GeneratingSet, GenerationCheck, GrowthError, GrowthSeries, SeriesKind, DEFAULT_BUDGET,
};
use vatc::schema::{from_json, to_json_pretty, EndoFile, GroupFile};
use vatc::tc::{TcError, TwistedConjugacy as TcEngine};

type PyElem = (Vec<i64>, usize);

fn value_err(msg: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(msg.to_string())
}

fn growth_err(e: GrowthError) -> PyErr {
    match e {
        GrowthError::ResourceGuard { .. }
        | GrowthError::Quotient(TcError::ResourceGuard { .. }) => {
            PyRuntimeError::new_err(e.to_string())
        }
        other => PyValueError::new_err(other.to_string()),
    }
}

fn tc_err(e: TcError) -> PyErr {
    match e {
        TcError::ResourceGuard { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_element(group: &VAGroupData, (vector, coset): PyElem) -> PyResult<GroupElement> {
    if vector.len() != group.lattice_rank() {
        return Err(value_err(format!(
            "expected {} coordinates, got {}",
            group.lattice_rank(),
            vector.len()
        )));
    }
    if coset >= group.coset_count() {
        return Err(value_err(format!("coset index {coset} out of range")));
    }
    Ok(GroupElement::new(vector, coset))
}

fn from_element(g: &GroupElement) -> PyElem {
    (g.vector.clone(), g.coset)
}

fn gen_set(group: &VAGroupData, gens: Vec<PyElem>) -> PyResult<GeneratingSet> {
    let elements: Vec<GroupElement> =
        gens.into_iter().map(|g| to_element(group, g)).collect::<PyResult<_>>()?;
    GeneratingSet::new(group, &elements).map_err(growth_err)
}

/// A finitely generated virtually abelian group, presented by its lattice
/// rank, coset multiplication table, cocycle, and lattice action.
#[pyclass(frozen)]
struct Group {
    inner: VAGroupData,
}

#[pymethods]
impl Group {
    /// Parse and fully validate a group from its JSON description.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file: GroupFile = from_json(text).map_err(value_err)?;
        let inner = file.to_group().map_err(value_err)?;
        let report = inner.validate();
        if !report.is_valid() {
            return Err(value_err(format!("invalid group data: {report}")));
        }
        Ok(Group { inner })
    }

    fn to_json(&self) -> String {
        to_json_pretty(&GroupFile::from_group(&self.inner))
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.lattice_rank()
    }

    #[getter]
    fn cosets(&self) -> Vec<String> {
        self.inner.coset_labels().to_vec()
    }

    fn multiply(&self, g: PyElem, h: PyElem) -> PyResult<PyElem> {
        let g = to_element(&self.inner, g)?;
        let h = to_element(&self.inner, h)?;
        Ok(from_element(&self.inner.multiply(&g, &h)))
    }

    fn inverse(&self, g: PyElem) -> PyResult<PyElem> {
        let g = to_element(&self.inner, g)?;
        Ok(from_element(&self.inner.inverse(&g)))
    }

    fn standard_generators(&self) -> Vec<PyElem> {
        self.inner.standard_generators().iter().map(from_element).collect()
    }

    /// Parse and validate an endomorphism of this group from JSON.
    fn endomorphism_from_json(&self, text: &str) -> PyResult<Endomorphism> {
        let file: EndoFile = from_json(text).map_err(value_err)?;
        self.endomorphism(file.matrix, file.rep_image.iter().map(from_element).collect())
    }

    /// Build and validate an endomorphism from its lattice matrix and the
    /// images of the coset representatives.
    fn endomorphism(
        &self,
        matrix: Vec<Vec<i64>>,
        rep_image: Vec<PyElem>,
    ) -> PyResult<Endomorphism> {
        let rep_image: Vec<GroupElement> =
            rep_image.into_iter().map(|g| to_element(&self.inner, g)).collect::<PyResult<_>>()?;
        let endo =
            vatc::group::Endomorphism::new(&self.inner, matrix, rep_image).map_err(value_err)?;
        let report = endo.validate(&self.inner);
        if !report.is_valid() {
            return Err(value_err(format!("not an endomorphism: {report}")));
        }
        Ok(Endomorphism { inner: endo })
    }

    /// Cumulative ball sizes `beta(r)` for `r = 0..=rmax`.
    #[pyo3(signature = (gens, rmax, budget=None))]
    fn ball_sizes(
        &self,
        gens: Vec<PyElem>,
        rmax: u64,
        budget: Option<u64>,
    ) -> PyResult<Vec<(u64, u64)>> {
        let gens = gen_set(&self.inner, gens)?;
        let ball = bfs_ball(&self.inner, &gens, rmax, budget.unwrap_or(DEFAULT_BUDGET))
            .map_err(growth_err)?;
        Ok(beta_series(&ball).points)
    }

    /// Semi-decide whether `gens` generates the group: returns "verified"
    /// or "unknown".
    #[pyo3(signature = (gens, budget=None))]
    fn check_generates(&self, gens: Vec<PyElem>, budget: Option<u64>) -> PyResult<&'static str> {
        let gens = gen_set(&self.inner, gens)?;
        let res = check_generates(&self.inner, &gens, budget.unwrap_or(DEFAULT_BUDGET))
            .map_err(growth_err)?;
        Ok(match res {
            GenerationCheck::Verified => "verified",
            GenerationCheck::Unknown => "unknown",
        })
    }
}

/// An endomorphism of a [`Group`], validated against it.
#[pyclass(frozen)]
struct Endomorphism {
    inner: vatc::group::Endomorphism,
}

#[pymethods]
impl Endomorphism {
    fn matrix(&self) -> Vec<Vec<i64>> {
        self.inner.matrix().rows()
    }

    fn rep_images(&self) -> Vec<PyElem> {
        self.inner.rep_images().iter().map(from_element).collect()
    }
}

/// The twisted conjugacy engine for one (group, endomorphism) pair.
#[pyclass(frozen, name = "TwistedConjugacy")]
struct TwistedConjugacy {
    group: VAGroupData,
    inner: TcEngine,
}

#[pymethods]
impl TwistedConjugacy {
    #[new]
    fn new(group: &Group, endo: &Endomorphism) -> PyResult<Self> {
        if endo.inner.matrix().n() != group.inner.lattice_rank()
            || endo.inner.rep_images().len() != group.inner.coset_count()
        {
            return Err(value_err("endomorphism does not fit this group"));
        }
        Ok(TwistedConjugacy {
            group: group.inner.clone(),
            inner: TcEngine::new(&group.inner, &endo.inner),
        })
    }

    /// Canonical form of the class of `g`, as a `(vector, coset)` element.
    fn canonical_form(&self, g: PyElem) -> PyResult<PyElem> {
        let g = to_element(&self.group, g)?;
        let form = self.inner.canonical_form(&g);
        Ok((form.residue, form.coset))
    }

    fn are_twisted_conjugate(&self, g: PyElem, h: PyElem) -> PyResult<bool> {
        let g = to_element(&self.group, g)?;
        let h = to_element(&self.group, h)?;
        Ok(self.inner.are_twisted_conjugate(&g, &h))
    }

    /// The cosets the class of `g` meets and the growth degree of the class.
    fn class_support(&self, g: PyElem) -> PyResult<(Vec<usize>, usize)> {
        let g = to_element(&self.group, g)?;
        let s = self.inner.class_support_and_degree(&g);
        Ok((s.cosets, s.degree))
    }

    fn coset_ranks(&self) -> Vec<usize> {
        self.inner.predicted_degrees().coset_ranks
    }

    fn predicted_degrees<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let p = self.inner.predicted_degrees();
        let d = PyDict::new(py);
        d.set_item("coset_ranks", p.coset_ranks)?;
        d.set_item("fr_degree", p.fr_degree)?;
        d.set_item("fq_degree", p.fq_degree)?;
        d.set_item("ball_degree", p.ball_degree)?;
        Ok(d)
    }

    /// The Reidemeister number, or `None` when it is infinite.
    fn reidemeister(&self) -> Option<u64> {
        self.inner.reidemeister_number().as_finite()
    }

    fn quotient_reidemeister(&self, k: u64) -> PyResult<u64> {
        self.inner.quotient_reidemeister(k).map_err(tc_err)
    }

    fn quotient_reidemeister_bruteforce(&self, k: u64) -> PyResult<u64> {
        self.inner.quotient_reidemeister_bruteforce(k).map_err(tc_err)
    }

    fn quotient_canonical_form(&self, k: u64, g: PyElem) -> PyResult<PyElem> {
        let g = to_element(&self.group, g)?;
        let form = self.inner.quotient_canonical_form(k, &g).map_err(tc_err)?;
        Ok((form.residue, form.coset))
    }

    /// `f_R(r)` for `r = 0..=rmax`: twisted classes meeting the ball.
    #[pyo3(signature = (gens, rmax, budget=None))]
    fn fr_series(
        &self,
        gens: Vec<PyElem>,
        rmax: u64,
        budget: Option<u64>,
    ) -> PyResult<Vec<(u64, u64)>> {
        let gens = gen_set(&self.group, gens)?;
        let ball = bfs_ball(&self.group, &gens, rmax, budget.unwrap_or(DEFAULT_BUDGET))
            .map_err(growth_err)?;
        Ok(fr_series(&self.inner, &ball).points)
    }

    /// Elements of the class of `g0` in the ball, cumulatively by radius.
    #[pyo3(signature = (gens, rmax, g0, budget=None))]
    fn class_series(
        &self,
        gens: Vec<PyElem>,
        rmax: u64,
        g0: PyElem,
        budget: Option<u64>,
    ) -> PyResult<Vec<(u64, u64)>> {
        let gens = gen_set(&self.group, gens)?;
        let g0 = to_element(&self.group, g0)?;
        let ball = bfs_ball(&self.group, &gens, rmax, budget.unwrap_or(DEFAULT_BUDGET))
            .map_err(growth_err)?;
        Ok(class_series(&self.inner, &ball, &g0).points)
    }

    /// `f_Q(k)` for `k = 1..=kmax`.
    fn quotient_series(&self, kmax: u64) -> PyResult<Vec<(u64, u64)>> {
        Ok(quotient_series(&self.inner, kmax).map_err(growth_err)?.points)
    }
}

/// Least-squares slope of `log(count)` against `log(r)` over `window`,
/// compared with a predicted degree; returns a dict with the fit and a
/// boolean verdict.
#[pyfunction]
#[pyo3(name = "slope_fit")]
fn slope_fit_py<'py>(
    py: Python<'py>,
    points: Vec<(u64, u64)>,
    window: (u64, u64),
    predicted_degree: usize,
    tolerance: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let series = GrowthSeries { kind: SeriesKind::Ball, points };
    let report = slope_fit(&series, window, predicted_degree, tolerance).map_err(growth_err)?;
    let d = PyDict::new(py);
    d.set_item("fitted_slope", report.fitted_slope)?;
    d.set_item("predicted_degree", report.predicted_degree)?;
    d.set_item("window", report.window)?;
    d.set_item("residual", report.residual)?;
    d.set_item("tolerance", report.tolerance)?;
    d.set_item("verdict", report.verdict)?;
    Ok(d)
}

#[pymodule]
fn vatc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Group>()?;
    m.add_class::<Endomorphism>()?;
    m.add_class::<TwistedConjugacy>()?;
    m.add_function(wrap_pyfunction!(slope_fit_py, m)?)?;
    Ok(())
}
