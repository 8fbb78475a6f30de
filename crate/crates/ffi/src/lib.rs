//! C ABI over the two-qubit teleportation simulator.
//!
//! States cross the boundary as opaque `EtDensity` handles owned by the
//! caller and released with [`et_density_free`]. Every fallible entry point
//! returns an [`EtStatus`] and writes its result through an out-pointer; the
//! text of the most recent error on the calling thread is available from
//! [`et_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use entangle_teleport::linalg::{ComplexMatrix, C64};
use entangle_teleport::states::{self, BlochRep, DensityMatrix, PureState, Side, WernerChannel};
use entangle_teleport::{formulas, measures, teleport, Error};

/// Status codes returned by every fallible call. `ET_STATUS_OK` is zero.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtStatus {
    Ok = 0,
    NullPointer = 1,
    DimensionMismatch = 2,
    InvalidSubsystem = 3,
    ContractViolation = 4,
    Domain = 5,
    InvalidState = 6,
    NoConvergence = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Opaque two-qubit density matrix.
pub struct EtDensity(DensityMatrix);

/// Bloch form of a two-qubit state: `c` is row-major, `c[3 * n + k]` pairs
/// sigma_n on the first qubit with sigma_k on the second.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EtBloch {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub c: [f64; 9],
}

impl From<BlochRep> for EtBloch {
    fn from(rep: BlochRep) -> Self {
        let mut c = [0.0; 9];
        for (dst, src) in c.iter_mut().zip(rep.c.iter().flatten()) {
            *dst = *src;
        }
        EtBloch { a: rep.a, b: rep.b, c }
    }
}

impl From<&EtBloch> for BlochRep {
    fn from(b: &EtBloch) -> Self {
        BlochRep { a: b.a, b: b.b, c: std::array::from_fn(|n| std::array::from_fn(|k| b.c[3 * n + k])) }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> EtStatus {
    match err {
        Error::DimensionMismatch(_) => EtStatus::DimensionMismatch,
        Error::InvalidSubsystem(_) => EtStatus::InvalidSubsystem,
        Error::ContractViolation(_) => EtStatus::ContractViolation,
        Error::Domain { .. } => EtStatus::Domain,
        Error::InvalidState(_) => EtStatus::InvalidState,
        Error::NoConvergence { .. } => EtStatus::NoConvergence,
    }
}

enum Failure {
    Core(Error),
    Null(&'static str),
    Buffer(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

/// Runs `f`, mapping errors and panics onto status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EtStatus {
    let (status, msg) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => return EtStatus::Ok,
        Ok(Err(Failure::Core(e))) => (status_of(&e), e.to_string()),
        Ok(Err(Failure::Null(arg))) => (EtStatus::NullPointer, format!("null pointer passed as `{arg}`")),
        Ok(Err(Failure::Buffer(need))) => (EtStatus::BufferTooSmall, format!("buffer needs {need} entries")),
        Err(_) => (EtStatus::Panic, "internal panic".to_owned()),
    };
    set_last_error(msg);
    status
}

unsafe fn deref<'a, T>(p: *const T, arg: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(arg))
}

unsafe fn write<T>(p: *mut T, arg: &'static str, value: T) -> Result<(), Failure> {
    if p.is_null() {
        return Err(Failure::Null(arg));
    }
    p.write(value);
    Ok(())
}

unsafe fn write_handle(out: *mut *mut EtDensity, rho: DensityMatrix) -> Result<(), Failure> {
    write(out, "out", Box::into_raw(Box::new(EtDensity(rho))))
}

fn side(particle: u32) -> Result<Side, Failure> {
    match particle {
        1 => Ok(Side::A),
        2 => Ok(Side::B),
        _ => Err(Error::InvalidSubsystem(format!("particle must be 1 or 2, got {particle}")).into()),
    }
}

/// Copies the last error message of this thread into `buf` as a
/// NUL-terminated string, truncating if needed. Returns the full message
/// length in bytes (without the terminator), or 0 if there is none.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn et_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Builds a state from a row-major 4 x 4 matrix given as separate real and
/// imaginary parts. The matrix must be Hermitian, unit trace and PSD.
///
/// # Safety
/// `re` and `im` must each point to 16 readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_density_from_parts(re: *const f64, im: *const f64, out: *mut *mut EtDensity) -> EtStatus {
    guard(|| {
        if re.is_null() {
            return Err(Failure::Null("re"));
        }
        if im.is_null() {
            return Err(Failure::Null("im"));
        }
        let re = std::slice::from_raw_parts(re, 16);
        let im = std::slice::from_raw_parts(im, 16);
        let data = re.iter().zip(im).map(|(&r, &i)| C64::new(r, i)).collect();
        let rho = DensityMatrix::new(ComplexMatrix::new(4, 4, data)?)?;
        write_handle(out, rho)
    })
}

/// Projector onto the normalized pure state with the given four amplitudes.
///
/// # Safety
/// `re` and `im` must each point to 4 readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_density_pure(re: *const f64, im: *const f64, out: *mut *mut EtDensity) -> EtStatus {
    guard(|| {
        let psi = pure_from_parts(re, im)?;
        write_handle(out, psi.projector())
    })
}

unsafe fn pure_from_parts(re: *const f64, im: *const f64) -> Result<PureState, Failure> {
    let re = deref(re.cast::<[f64; 4]>(), "re")?;
    let im = deref(im.cast::<[f64; 4]>(), "im")?;
    Ok(PureState::new(std::array::from_fn(|i| C64::new(re[i], im[i])))?)
}

/// Werner state with singlet weight parameter `phi` in [-1, 1].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_werner(phi: f64, out: *mut *mut EtDensity) -> EtStatus {
    guard(|| write_handle(out, states::werner(phi)?))
}

/// cos(theta)|00> + sin(theta)|11>.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_schmidt_pure(theta: f64, out: *mut *mut EtDensity) -> EtStatus {
    guard(|| {
        if !theta.is_finite() {
            return Err(Error::Domain { value: theta, domain: "finite theta" }.into());
        }
        write_handle(out, states::schmidt_pure(theta).projector())
    })
}

/// Haar-random pure state, reproducible from `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_random_pure(seed: u64, out: *mut *mut EtDensity) -> EtStatus {
    guard(|| write_handle(out, states::random_pure(seed).projector()))
}

/// Random mixed state, reproducible from `seed`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_random_mixed(seed: u64, out: *mut *mut EtDensity) -> EtStatus {
    guard(|| write_handle(out, states::random_mixed(seed)))
}

/// # Safety
/// `rho` must be a live handle or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_density_clone(rho: *const EtDensity, out: *mut *mut EtDensity) -> EtStatus {
    guard(|| write_handle(out, deref(rho, "rho")?.0.clone()))
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `rho` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn et_density_free(rho: *mut EtDensity) {
    if !rho.is_null() {
        drop(Box::from_raw(rho));
    }
}

/// Copies the row-major 4 x 4 matrix into `re` and `im`.
///
/// # Safety
/// `re` and `im` must each point to 16 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn et_density_parts(rho: *const EtDensity, re: *mut f64, im: *mut f64) -> EtStatus {
    guard(|| {
        let m = deref(rho, "rho")?.0.matrix();
        if re.is_null() {
            return Err(Failure::Null("re"));
        }
        if im.is_null() {
            return Err(Failure::Null("im"));
        }
        for r in 0..4 {
            for c in 0..4 {
                *re.add(4 * r + c) = m[(r, c)].re;
                *im.add(4 * r + c) = m[(r, c)].im;
            }
        }
        Ok(())
    })
}

/// Negativity-based entanglement in [0, 1].
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_entanglement(rho: *const EtDensity, out: *mut f64) -> EtStatus {
    guard(|| {
        let rho = &deref(rho, "rho")?.0;
        write(out, "out", measures::entanglement(rho)?)
    })
}

/// Tr(rho^2).
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_purity(rho: *const EtDensity, out: *mut f64) -> EtStatus {
    guard(|| {
        let rho = &deref(rho, "rho")?.0;
        write(out, "out", measures::purity(rho))
    })
}

/// Overlap with the singlet.
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_singlet_fraction(rho: *const EtDensity, out: *mut f64) -> EtStatus {
    guard(|| {
        let rho = &deref(rho, "rho")?.0;
        write(out, "out", measures::singlet_fraction(rho)?)
    })
}

/// Total information content, in [0, 2] for two qubits.
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_total_information(rho: *const EtDensity, out: *mut f64) -> EtStatus {
    guard(|| {
        let rho = &deref(rho, "rho")?.0;
        write(out, "out", measures::total_information(rho)?)
    })
}

/// Information held in correlations beyond the local parts.
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_correlation_information(rho: *const EtDensity, out: *mut f64) -> EtStatus {
    guard(|| {
        let rho = &deref(rho, "rho")?.0;
        write(out, "out", measures::correlation_information(rho)?)
    })
}

/// Information of one particle (1 or 2) alone.
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_individual_information(rho: *const EtDensity, particle: u32, out: *mut f64) -> EtStatus {
    guard(|| write(out, "out", measures::individual_information(&deref(rho, "rho")?.0, side(particle)?)?))
}

/// Fidelity <psi|rho|psi> against the pure state with amplitudes `re + i im`.
///
/// # Safety
/// `re` and `im` must each point to 4 readable doubles; `rho` must be a live
/// handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_fidelity(re: *const f64, im: *const f64, rho: *const EtDensity, out: *mut f64) -> EtStatus {
    guard(|| {
        let psi = pure_from_parts(re, im)?;
        write(out, "out", measures::fidelity(&psi, &deref(rho, "rho")?.0)?)
    })
}

/// Teleports particle 1 or 2 through a Werner channel of parameter `phi`
/// and returns the outcome-averaged state.
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_teleport_one(
    rho: *const EtDensity,
    particle: u32,
    phi: f64,
    out: *mut *mut EtDensity,
) -> EtStatus {
    guard(|| {
        let result = teleport::teleport_one(&deref(rho, "rho")?.0, side(particle)?, WernerChannel::new(phi)?)?;
        write_handle(out, result.state)
    })
}

/// Teleports both particles, the first through a channel of parameter `phi1`
/// and the second through `phi2`.
///
/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_teleport_two(
    rho: *const EtDensity,
    phi1: f64,
    phi2: f64,
    out: *mut *mut EtDensity,
) -> EtStatus {
    guard(|| {
        let result =
            teleport::teleport_two(&deref(rho, "rho")?.0, WernerChannel::new(phi1)?, WernerChannel::new(phi2)?)?;
        write_handle(out, result.state)
    })
}

/// Probabilities of the 16 joint Bell outcomes of a double teleportation,
/// ordered by first-measurement index then second.
///
/// # Safety
/// `rho` must be a live handle; `probs` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn et_teleport_two_probabilities(
    rho: *const EtDensity,
    phi1: f64,
    phi2: f64,
    probs: *mut f64,
    len: usize,
) -> EtStatus {
    guard(|| {
        let result =
            teleport::teleport_two(&deref(rho, "rho")?.0, WernerChannel::new(phi1)?, WernerChannel::new(phi2)?)?;
        if probs.is_null() {
            return Err(Failure::Null("probs"));
        }
        if len < result.outcomes.len() {
            return Err(Failure::Buffer(result.outcomes.len()));
        }
        for (i, o) in result.outcomes.iter().enumerate() {
            *probs.add(i) = o.probability;
        }
        Ok(())
    })
}

/// # Safety
/// `rho` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_bloch_decompose(rho: *const EtDensity, out: *mut EtBloch) -> EtStatus {
    guard(|| write(out, "out", states::bloch_decompose(&deref(rho, "rho")?.0)?.into()))
}

/// Rebuilds a state from its Bloch form; fails if the result is not a state.
///
/// # Safety
/// `rep` must be readable; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_bloch_compose(rep: *const EtBloch, out: *mut *mut EtDensity) -> EtStatus {
    guard(|| write_handle(out, states::bloch_compose(&deref(rep, "rep")?.into())?))
}

/// Fidelity of a pure input of entanglement `e12` after both particles
/// cross channels of entanglement `ew`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_fidelity_formula(e12: f64, ew: f64, out: *mut f64) -> EtStatus {
    guard(|| write(out, "out", formulas::fidelity_formula(e12, ew)?))
}

/// Entanglement of the replica for a pure input of entanglement `e12`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_replica_entanglement(e12: f64, ew: f64, out: *mut f64) -> EtStatus {
    guard(|| write(out, "out", formulas::replica_entanglement_formula(e12, ew)?))
}

/// Channel entanglement below which the replica of a pure `e12` input is separable.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_critical_channel_entanglement(e12: f64, out: *mut f64) -> EtStatus {
    guard(|| write(out, "out", formulas::critical_channel_entanglement(e12)?))
}

/// Correlation information left after teleporting both particles.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_correlation_transfer(ic12: f64, ew: f64, out: *mut f64) -> EtStatus {
    guard(|| write(out, "out", formulas::correlation_transfer(ic12, ew)?))
}

/// Entanglement after teleporting one particle of a pure `e12` input.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_intermediate_entanglement(e12: f64, ew: f64, out: *mut f64) -> EtStatus {
    guard(|| write(out, "out", formulas::intermediate_entanglement(e12, ew)?))
}

/// Channel contraction factor (2 ew + 1) / 3.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn et_kappa(ew: f64, out: *mut f64) -> EtStatus {
    guard(|| write(out, "out", formulas::kappa(ew)?))
}
