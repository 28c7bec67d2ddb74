//! Python bindings: parsing `.skg` inputs, coset enumeration, validation,
//! handle invariants and finite-quotient separation.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use skg_core::classifier::HandleClass;
use skg_core::{
    CaseLabel, ClassifierContext, ClassifierError, EnumerationError, EnumerationLimits, HandleKind,
    InputError, Separation, SeparationOptions, SurfaceKnotInput, Word,
};

create_exception!(
    skg,
    SkgError,
    PyException,
    "A domain error from the classifier."
);
create_exception!(
    skg,
    ResourceExhausted,
    SkgError,
    "Coset enumeration ran out of budget."
);

fn input_err(e: InputError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn enum_err(e: EnumerationError) -> PyErr {
    match e {
        EnumerationError::ResourceExhausted { .. } => ResourceExhausted::new_err(e.to_string()),
        other => SkgError::new_err(other.to_string()),
    }
}

fn classifier_err(e: ClassifierError) -> PyErr {
    match e {
        ClassifierError::Enumeration(inner) => enum_err(inner),
        other => SkgError::new_err(other.to_string()),
    }
}

fn limits(max_cosets: Option<usize>) -> PyResult<EnumerationLimits> {
    match max_cosets {
        Some(n) => EnumerationLimits::with_max_live(n).map_err(enum_err),
        None => Ok(EnumerationLimits::default()),
    }
}

fn kind(case: u8, core_oriented: bool) -> PyResult<HandleKind> {
    let case = CaseLabel::from_number(case)
        .ok_or_else(|| PyValueError::new_err("case must be 1, 2 or 3"))?;
    Ok(HandleKind::new(case, core_oriented))
}

/// A parsed `.skg` input.
#[pyclass(frozen, skip_from_py_object, module = "skg")]
#[derive(Clone)]
struct SurfaceKnot {
    inner: SurfaceKnotInput,
}

impl SurfaceKnot {
    fn word(&self, text: &str) -> PyResult<Word> {
        self.inner.presentation.word(text).map_err(input_err)
    }
}

#[pymethods]
impl SurfaceKnot {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(SurfaceKnot {
            inner: skg_core::parse_input(text).map_err(input_err)?,
        })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PyValueError::new_err(format!("{path}: {e}")))?;
        Self::parse(&text)
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label.clone()
    }

    #[getter]
    fn generators(&self) -> Vec<String> {
        self.inner.presentation.generators().to_vec()
    }

    #[getter]
    fn orientable(&self) -> bool {
        self.inner.surface_orientable
    }

    /// Freely reduced form of a word, rendered back to text.
    fn reduce(&self, word: &str) -> PyResult<String> {
        Ok(self.inner.presentation.render(&self.word(word)?))
    }

    fn to_skg(&self) -> String {
        self.inner.to_skg()
    }

    fn __repr__(&self) -> String {
        format!(
            "SurfaceKnot(label={:?}, orientable={})",
            self.inner.label, self.inner.surface_orientable
        )
    }
}

/// Coset table of `P` or `P+`.
#[pyclass(frozen, module = "skg")]
struct CosetTable {
    knot: SurfaceKnotInput,
    inner: skg_core::CosetTable,
}

#[pymethods]
impl CosetTable {
    #[staticmethod]
    #[pyo3(signature = (knot, subgroup = "P", max_cosets = None))]
    fn enumerate(knot: &SurfaceKnot, subgroup: &str, max_cosets: Option<usize>) -> PyResult<Self> {
        let gens = match subgroup {
            "P" => knot.inner.p_generators.clone(),
            "P+" => knot
                .inner
                .p_plus_generators
                .clone()
                .ok_or_else(|| SkgError::new_err("the input has no P+"))?,
            other => return Err(PyValueError::new_err(format!("unknown subgroup {other:?}"))),
        };
        let inner = skg_core::enumerate(&knot.inner.presentation, &gens, limits(max_cosets)?)
            .map_err(enum_err)?;
        Ok(CosetTable {
            knot: knot.inner.clone(),
            inner,
        })
    }

    #[getter]
    fn index(&self) -> usize {
        self.inner.index()
    }

    /// Coset reached from `start` (1-based) by reading `word`.
    fn trace(&self, start: usize, word: &str) -> PyResult<usize> {
        let w = self.knot.presentation.word(word).map_err(input_err)?;
        self.inner
            .trace(start, &w)
            .map_err(|e| SkgError::new_err(e.to_string()))
    }

    fn contains(&self, word: &str) -> PyResult<bool> {
        let w = self.knot.presentation.word(word).map_err(input_err)?;
        self.inner
            .contains(&w)
            .map_err(|e| SkgError::new_err(e.to_string()))
    }

    /// A word carrying coset 1 to coset `c`.
    fn witness(&self, c: usize) -> PyResult<String> {
        let w = self
            .inner
            .witness(c)
            .map_err(|e| SkgError::new_err(e.to_string()))?;
        Ok(self.knot.presentation.render(&w))
    }

    /// `(cosets defined, max live cosets, coincidences)`.
    fn stats(&self) -> (usize, usize, usize) {
        let s = self.inner.stats();
        (s.total_defined, s.max_live, s.coincidences)
    }
}

/// A handle invariant tied to the classifier that produced it.
#[pyclass(frozen, module = "skg")]
struct HandleInvariant {
    ctx: Arc<ClassifierContext>,
    inner: skg_core::HandleInvariant,
}

#[pymethods]
impl HandleInvariant {
    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind_name()
    }

    fn to_json(&self) -> String {
        self.ctx.invariant_json(&self.inner).to_string()
    }

    fn __str__(&self) -> String {
        self.ctx.render(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("HandleInvariant({})", self.ctx.render(&self.inner))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.hash(&mut h);
        h.finish()
    }
}

/// Validated input with its peripheral coset tables.
#[pyclass(frozen, module = "skg")]
struct Classifier {
    ctx: Arc<ClassifierContext>,
}

impl Classifier {
    fn wrap(&self, inner: skg_core::HandleInvariant) -> HandleInvariant {
        HandleInvariant {
            ctx: self.ctx.clone(),
            inner,
        }
    }

    fn word(&self, text: &str) -> PyResult<Word> {
        self.ctx.input().presentation.word(text).map_err(input_err)
    }
}

#[pymethods]
impl Classifier {
    #[new]
    #[pyo3(signature = (knot, max_cosets = None))]
    fn new(knot: &SurfaceKnot, max_cosets: Option<usize>) -> PyResult<Self> {
        let ctx = ClassifierContext::build(knot.inner.clone(), limits(max_cosets)?)
            .map_err(classifier_err)?;
        Ok(Classifier { ctx: Arc::new(ctx) })
    }

    /// Canonical index of the double coset `PgP`.
    fn oriented_cord(&self, cord: &str) -> PyResult<usize> {
        let d = self
            .ctx
            .oriented_cord_invariant(&self.word(cord)?)
            .map_err(classifier_err)?;
        Ok(d.canonical())
    }

    #[pyo3(signature = (case, cord, core_oriented = false))]
    fn invariant(&self, case: u8, cord: &str, core_oriented: bool) -> PyResult<HandleInvariant> {
        let inv = self
            .ctx
            .handle_invariant(kind(case, core_oriented)?, &self.word(cord)?)
            .map_err(classifier_err)?;
        Ok(self.wrap(inv))
    }

    #[pyo3(signature = (case, cord1, cord2, core_oriented = false))]
    fn equivalent(
        &self,
        case: u8,
        cord1: &str,
        cord2: &str,
        core_oriented: bool,
    ) -> PyResult<bool> {
        self.ctx
            .equivalent(
                kind(case, core_oriented)?,
                &self.word(cord1)?,
                &self.word(cord2)?,
            )
            .map_err(classifier_err)
    }

    /// `(representative cord, invariant)` for every class.
    #[pyo3(signature = (case, core_oriented = false))]
    fn classes(&self, case: u8, core_oriented: bool) -> PyResult<Vec<(String, HandleInvariant)>> {
        let list = self
            .ctx
            .enumerate_classes(kind(case, core_oriented)?)
            .map_err(classifier_err)?;
        Ok(list
            .into_iter()
            .map(
                |HandleClass {
                     invariant,
                     representative,
                 }| {
                    (
                        self.ctx.input().presentation.render(&representative),
                        self.wrap(invariant),
                    )
                },
            )
            .collect())
    }

    /// Candidate built from the double cosets of the given words.
    #[pyo3(signature = (case, words, core_oriented = false))]
    fn candidate(
        &self,
        case: u8,
        words: Vec<String>,
        core_oriented: bool,
    ) -> PyResult<HandleInvariant> {
        let ws = words
            .iter()
            .map(|w| self.word(w))
            .collect::<PyResult<Vec<_>>>()?;
        let inv = self
            .ctx
            .candidate_from_words(kind(case, core_oriented)?, &ws)
            .map_err(classifier_err)?;
        Ok(self.wrap(inv))
    }

    #[pyo3(signature = (case, invariant, core_oriented = false))]
    fn image_member(
        &self,
        case: u8,
        invariant: &HandleInvariant,
        core_oriented: bool,
    ) -> PyResult<bool> {
        self.ctx
            .image_member(kind(case, core_oriented)?, &invariant.inner)
            .map_err(classifier_err)
    }

    #[pyo3(signature = (case, core_oriented = false))]
    fn nonsurjectivity_witness(
        &self,
        case: u8,
        core_oriented: bool,
    ) -> PyResult<Option<HandleInvariant>> {
        let w = self
            .ctx
            .nonsurjectivity_witness(kind(case, core_oriented)?)
            .map_err(classifier_err)?;
        Ok(w.map(|w| self.wrap(w)))
    }
}

/// Validation checks as `(name, status, detail)`.
#[pyfunction]
#[pyo3(signature = (knot, max_cosets = None))]
fn validate(
    knot: &SurfaceKnot,
    max_cosets: Option<usize>,
) -> PyResult<Vec<(String, String, String)>> {
    let report = skg_core::validate(&knot.inner, limits(max_cosets)?);
    Ok(report
        .checks
        .into_iter()
        .map(|c| {
            let status = format!("{:?}", c.status).to_lowercase();
            (c.name.to_string(), status, c.detail)
        })
        .collect())
}

/// `("distinct", degree, images)` or `("unknown", homomorphisms tried, truncated)`.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (knot, case, cord1, cord2, core_oriented = false, max_degree = 6, max_homs = 64))]
fn separate<'py>(
    py: Python<'py>,
    knot: &SurfaceKnot,
    case: u8,
    cord1: &str,
    cord2: &str,
    core_oriented: bool,
    max_degree: usize,
    max_homs: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let options = SeparationOptions {
        max_degree,
        max_homs,
        ..SeparationOptions::default()
    };
    let (g1, g2) = (knot.word(cord1)?, knot.word(cord2)?);
    let k = kind(case, core_oriented)?;
    let verdict = py
        .detach(|| skg_core::quotient_separate(&knot.inner, k, &g1, &g2, options))
        .map_err(classifier_err)?;
    match verdict {
        Separation::Distinct { degree, assignment } => {
            let images: Vec<Vec<u32>> = assignment
                .images
                .iter()
                .map(|p| p.images().to_vec())
                .collect();
            ("distinct", degree, images)
                .into_pyobject(py)
                .map(|t| t.into_any())
        }
        Separation::Unknown {
            homomorphisms_tried,
            truncated,
        } => ("unknown", homomorphisms_tried, truncated)
            .into_pyobject(py)
            .map(|t| t.into_any()),
    }
}

/// Homomorphisms from the knot group to `S_degree`, as image lists per
/// generator on points `0..degree`.
#[pyfunction]
#[pyo3(signature = (knot, degree, limit = 64))]
fn find_homomorphisms(knot: &SurfaceKnot, degree: usize, limit: usize) -> Vec<Vec<Vec<u32>>> {
    skg_core::find_homomorphisms(&knot.inner.presentation, degree, limit)
        .into_iter()
        .map(|a| a.images.iter().map(|p| p.images().to_vec()).collect())
        .collect()
}

#[pymodule]
fn skg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<SurfaceKnot>()?;
    m.add_class::<CosetTable>()?;
    m.add_class::<Classifier>()?;
    m.add_class::<HandleInvariant>()?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(separate, m)?)?;
    m.add_function(wrap_pyfunction!(find_homomorphisms, m)?)?;
    m.add("SkgError", m.py().get_type::<SkgError>())?;
    m.add("ResourceExhausted", m.py().get_type::<ResourceExhausted>())?;
    Ok(())
}
