//! C ABI over `dicke-core`.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `_free`. Every function returns a [`DkStatus`]; on failure the
//! message is available from [`dk_last_error`] on the same thread. Panics
//! never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use dicke_core::basis::Spin;
use dicke_core::cli::exit_code;
use dicke_core::exact::swanson_spectrum;
use dicke_core::metric::{build_metric, pseudo_hermiticity_residual};
use dicke_core::model::{build_h, validate, CaseTag, ModelParams};
use dicke_core::numerics::Spectrum;
use dicke_core::qpt::{
    analytic_order_params_general, finite_j_order_params, set_field, CutoffPolicy, Route,
};
use dicke_core::spectral::{compare_spectra, h_spectrum, image_spectrum};
use dicke_core::Error;

/// Status codes. 2, 3 and 4 coincide with the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidConfig = 2,
    InvalidParameters = 3,
    Numerical = 4,
    OutOfRange = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DkOperator {
    /// The pseudo-hermitian Hamiltonian, general solver.
    Hamiltonian = 0,
    /// Its hermitian image, hermitian solver.
    Image = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DkRoute {
    Image = 0,
    Direct = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DkCaseTag {
    Full = 0,
    NoTheta = 1,
    NoGammaDelta = 2,
    NoAlphaBeta = 3,
    BosonOnly = 4,
    Hermitian = 5,
}

/// One finite-j ground-state record.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct DkScanPoint {
    pub coupling: f64,
    pub cutoff: usize,
    pub jz_over_j: f64,
    pub n_over_j: f64,
    pub e0_over_j: f64,
    pub analytic_jz: f64,
    pub analytic_n: f64,
    pub converged: bool,
}

/// Opaque model parameters.
pub struct DkParams(ModelParams);

/// Opaque eigenvalue list.
pub struct DkSpectrum(Spectrum);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

struct Failure(DkStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match exit_code(&e) {
            2 => DkStatus::InvalidConfig,
            3 => DkStatus::InvalidParameters,
            _ => DkStatus::Numerical,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(DkStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics to a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            DkStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            DkStatus::Panic
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn as_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn key_str<'a>(key: *const c_char) -> Result<&'a str, Failure> {
    if key.is_null() {
        return Err(null("key"));
    }
    CStr::from_ptr(key)
        .to_str()
        .map_err(|_| Failure(DkStatus::InvalidConfig, "key is not UTF-8".into()))
}

/// New parameter set with ω = ω₀ = 1, all couplings zero, j = 1/2, cutoff 16.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dk_params_new(out: *mut *mut DkParams) -> DkStatus {
    guard(|| {
        let out = as_mut(out, "out")?;
        *out = Box::into_raw(Box::new(DkParams(ModelParams::default())));
        Ok(())
    })
}

/// # Safety
/// `params` must be null or come from [`dk_params_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn dk_params_free(params: *mut DkParams) {
    if !params.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(params))));
    }
}

/// Sets `omega`, `omega0`, `theta1`, `theta2`, `alpha`, `beta`, `gamma`,
/// `delta`, `xi1`, `xi2`, `xi3`, `j` (a half-integer) or `cutoff`.
///
/// # Safety
/// `params` must be a live handle; `key` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn dk_params_set(
    params: *mut DkParams,
    key: *const c_char,
    value: f64,
) -> DkStatus {
    guard(|| {
        let p = &mut as_mut(params, "params")?.0;
        let key = key_str(key)?;
        if !value.is_finite() {
            return Err(Failure(
                DkStatus::InvalidConfig,
                format!("{key}: value must be finite"),
            ));
        }
        match key {
            "j" => p.j = Spin::new(value)?,
            "cutoff" => {
                if value < 0.0 || value.fract() != 0.0 || value > u32::MAX as f64 {
                    return Err(Failure(
                        DkStatus::InvalidConfig,
                        format!("cutoff {value} is not a count"),
                    ));
                }
                p.cutoff = value as usize;
            }
            name => set_field(p, name, value)?,
        }
        Ok(())
    })
}

/// Reads one key, as accepted by [`dk_params_set`].
///
/// # Safety
/// `params` must be a live handle; `key` a NUL-terminated string; `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dk_params_get(
    params: *const DkParams,
    key: *const c_char,
    out: *mut f64,
) -> DkStatus {
    guard(|| {
        let p = &as_ref(params, "params")?.0;
        let key = key_str(key)?;
        let out = as_mut(out, "out")?;
        *out = match key {
            "j" => p.j.value(),
            "cutoff" => p.cutoff as f64,
            name => {
                let i = dicke_core::qpt::FIELDS
                    .iter()
                    .position(|f| *f == name)
                    .ok_or_else(|| {
                        Failure(DkStatus::InvalidConfig, format!("unknown key `{name}`"))
                    })?;
                p.values()[i]
            }
        };
        Ok(())
    })
}

/// Checks quasi-hermiticity. Returns `DK_STATUS_OK` either way; when the
/// set is invalid `*quasi_hermitian` is false and [`dk_last_error`] lists
/// the violated conditions.
///
/// # Safety
/// `params` must be a live handle; outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dk_validate(
    params: *const DkParams,
    quasi_hermitian: *mut bool,
    case_tag: *mut DkCaseTag,
) -> DkStatus {
    let mut violated = String::new();
    let status = guard(|| {
        let p = &as_ref(params, "params")?.0;
        let (qh, tag) = (
            as_mut(quasi_hermitian, "quasi_hermitian")?,
            as_mut(case_tag, "case_tag")?,
        );
        let report = validate(p);
        *qh = report.quasi_hermitian;
        *tag = match report.case_tag {
            CaseTag::Full => DkCaseTag::Full,
            CaseTag::NoTheta => DkCaseTag::NoTheta,
            CaseTag::NoGammaDelta => DkCaseTag::NoGammaDelta,
            CaseTag::NoAlphaBeta => DkCaseTag::NoAlphaBeta,
            CaseTag::BosonOnly => DkCaseTag::BosonOnly,
            CaseTag::Hermitian => DkCaseTag::Hermitian,
        };
        violated = report.violated_conditions.join("; ");
        Ok(())
    });
    if status == DkStatus::Ok {
        set_error(violated);
    }
    status
}

/// Eigenvalues of H or of its image, sorted by real part.
///
/// # Safety
/// `params` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dk_spectrum_new(
    params: *const DkParams,
    operator: DkOperator,
    out: *mut *mut DkSpectrum,
) -> DkStatus {
    guard(|| {
        let p = &as_ref(params, "params")?.0;
        let out = as_mut(out, "out")?;
        validate(p).into_result()?;
        let s = match operator {
            DkOperator::Hamiltonian => h_spectrum(p, false)?,
            DkOperator::Image => image_spectrum(p, false)?,
        };
        *out = Box::into_raw(Box::new(DkSpectrum(s)));
        Ok(())
    })
}

/// # Safety
/// `spectrum` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dk_spectrum_len(spectrum: *const DkSpectrum, out: *mut usize) -> DkStatus {
    guard(|| {
        *as_mut(out, "out")? = as_ref(spectrum, "spectrum")?.0.len();
        Ok(())
    })
}

/// # Safety
/// `spectrum` must be a live handle; `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dk_spectrum_eigenvalue(
    spectrum: *const DkSpectrum,
    index: usize,
    re: *mut f64,
    im: *mut f64,
) -> DkStatus {
    guard(|| {
        let s = &as_ref(spectrum, "spectrum")?.0;
        let (re, im) = (as_mut(re, "re")?, as_mut(im, "im")?);
        let z = s.eigenvalues.get(index).ok_or_else(|| {
            Failure(
                DkStatus::OutOfRange,
                format!("index {index} out of range for {} eigenvalues", s.len()),
            )
        })?;
        (*re, *im) = (z.re, z.im);
        Ok(())
    })
}

/// Whether every |Im λ| is within the spectrum's reality tolerance.
///
/// # Safety
/// `spectrum` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dk_spectrum_is_real(
    spectrum: *const DkSpectrum,
    out: *mut bool,
) -> DkStatus {
    guard(|| {
        *as_mut(out, "out")? = as_ref(spectrum, "spectrum")?.0.is_real;
        Ok(())
    })
}

/// # Safety
/// `spectrum` must be null or come from [`dk_spectrum_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn dk_spectrum_free(spectrum: *mut DkSpectrum) {
    if !spectrum.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(spectrum))));
    }
}

/// Relative distance between the spectra of H and its image, and the
/// relative imaginary-part defect of H. Invalid sets are compared against
/// a formal image rather than rejected.
///
/// # Safety
/// `params` must be a live handle; outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dk_compare_spectra(
    params: *const DkParams,
    relative_gap: *mut f64,
    relative_reality_defect: *mut f64,
) -> DkStatus {
    guard(|| {
        let p = &as_ref(params, "params")?.0;
        let (gap, defect) = (
            as_mut(relative_gap, "relative_gap")?,
            as_mut(relative_reality_defect, "relative_reality_defect")?,
        );
        let c = compare_spectra(p)?;
        (*gap, *defect) = (c.relative_gap(), c.relative_reality_defect());
        Ok(())
    })
}

/// ‖ηH − H†η‖ / ‖ηH‖ for the metric of a valid set.
///
/// # Safety
/// `params` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dk_pseudo_hermiticity_residual(
    params: *const DkParams,
    out: *mut f64,
) -> DkStatus {
    guard(|| {
        let p = &as_ref(params, "params")?.0;
        let out = as_mut(out, "out")?;
        let mf = build_metric(p)?;
        *out = pseudo_hermiticity_residual(&mf, &build_h(p))?;
        Ok(())
    })
}

/// Ground-state order parameters at the handle's j, doubling the cutoff
/// from `cutoff_start` to at most `cutoff_cap` until e0/j moves by less
/// than `tolerance`.
///
/// # Safety
/// `params` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dk_finite_j_order_params(
    params: *const DkParams,
    cutoff_start: usize,
    cutoff_cap: usize,
    tolerance: f64,
    route: DkRoute,
    out: *mut DkScanPoint,
) -> DkStatus {
    guard(|| {
        let p = &as_ref(params, "params")?.0;
        let out = as_mut(out, "out")?;
        if cutoff_start == 0 || cutoff_cap < cutoff_start || tolerance.is_nan() || tolerance <= 0.0
        {
            return Err(Failure(
                DkStatus::InvalidConfig,
                "need 0 < cutoff_start <= cutoff_cap and tolerance > 0".into(),
            ));
        }
        let policy = CutoffPolicy {
            start: cutoff_start,
            cap: cutoff_cap,
            tolerance,
        };
        let route = match route {
            DkRoute::Image => Route::Image,
            DkRoute::Direct => Route::Direct,
        };
        let r = finite_j_order_params(p, policy, route)?;
        *out = DkScanPoint {
            coupling: r.coupling,
            cutoff: r.cutoff,
            jz_over_j: r.jz_over_j,
            n_over_j: r.n_over_j,
            e0_over_j: r.e0_over_j,
            analytic_jz: r.analytic_jz,
            analytic_n: r.analytic_n,
            converged: r.converged,
        };
        Ok(())
    })
}

/// Thermodynamic-limit ⟨Jz⟩/j, ⟨a†a⟩/j and the control ratio μ (infinite
/// when the spin couplings vanish).
///
/// # Safety
/// `params` must be a live handle; outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dk_analytic_order_params(
    params: *const DkParams,
    jz_over_j: *mut f64,
    n_over_j: *mut f64,
    mu: *mut f64,
) -> DkStatus {
    guard(|| {
        let p = &as_ref(params, "params")?.0;
        let (jz, n, m) = (
            as_mut(jz_over_j, "jz_over_j")?,
            as_mut(n_over_j, "n_over_j")?,
            as_mut(mu, "mu")?,
        );
        let (o, value) = analytic_order_params_general(p)?;
        (*jz, *n, *m) = (o.jz_over_j, o.n_over_j, value);
        Ok(())
    })
}

/// Exact levels E₀..E_{len−1} of the single-mode squeezed oscillator,
/// written to `out[0..len]`.
///
/// # Safety
/// `out` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn dk_swanson_spectrum(
    omega: f64,
    theta1: f64,
    theta2: f64,
    out: *mut f64,
    len: usize,
) -> DkStatus {
    guard(|| {
        if len == 0 {
            return Ok(());
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let levels = swanson_spectrum(omega, theta1, theta2, len - 1)?;
        std::slice::from_raw_parts_mut(out, len).copy_from_slice(&levels);
        Ok(())
    })
}

/// Message of the last failed call on this thread, or an empty string.
/// Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn dk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn dk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
