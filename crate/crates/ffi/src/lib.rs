//! C interface to the symnash solver.
//!
//! Games and solutions are opaque handles released with their `_free`
//! function. Every fallible call returns a [`SymnashStatus`]; on failure the
//! message is available from [`symnash_last_error`] on the same thread.
//! Strings handed out by the library are released with
//! [`symnash_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use symnash::solver::{ProfileCheck, Solution, Solver, WitnessFile};
use symnash::{desymmetrize, validate_network, Budget, Constraints, Error, GameFile, GameNetwork};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymnashStatus {
    Ok = 0,
    /// No equilibrium, or the witness was rejected.
    NotFound = 1,
    InvalidGame = 2,
    BudgetExceeded = 3,
    /// Null pointer, bad UTF-8, out-of-range player or similar.
    InvalidArgument = 4,
    Internal = 5,
}

/// Search limits. Zero fields take the library defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SymnashBudget {
    pub candidates: u64,
    pub nodes: u64,
    pub jobs: u32,
}

/// A validated game network.
pub struct SymnashGame {
    game: GameNetwork,
}

/// An equilibrium found by a search.
pub struct SymnashSolution {
    solution: Solution,
    witness_json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(status: SymnashStatus, msg: &str) -> SymnashStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> SymnashStatus {
    let status = match e {
        Error::BudgetExceeded(_) | Error::OracleTooLarge(_) => SymnashStatus::BudgetExceeded,
        Error::IndexOutOfRange(_) | Error::ConflictingConstraints => SymnashStatus::InvalidArgument,
        _ => SymnashStatus::InvalidGame,
    };
    fail(status, &e.to_string())
}

/// Runs `f`, turning panics into `Internal`.
fn guard(f: impl FnOnce() -> SymnashStatus) -> SymnashStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(SymnashStatus::Internal, "internal panic"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, SymnashStatus> {
    if p.is_null() {
        return Err(fail(SymnashStatus::InvalidArgument, &format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(SymnashStatus::InvalidArgument, &format!("{what} is not UTF-8")))
}

unsafe fn players<'a>(p: *const usize, len: usize) -> Result<&'a [usize], SymnashStatus> {
    match (p.is_null(), len) {
        (_, 0) => Ok(&[]),
        (true, _) => Err(fail(SymnashStatus::InvalidArgument, "player list is null")),
        (false, _) => Ok(std::slice::from_raw_parts(p, len)),
    }
}

fn budget(b: *const SymnashBudget) -> Budget {
    let d = Budget::default();
    // SAFETY: callers pass null or a valid pointer.
    let Some(b) = (unsafe { b.as_ref() }) else { return d };
    Budget {
        candidates: if b.candidates == 0 { d.candidates } else { b.candidates },
        nodes: if b.nodes == 0 { d.nodes } else { b.nodes as usize },
        jobs: if b.jobs == 0 { d.jobs } else { b.jobs as usize },
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn symnash_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread; empty if none. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn symnash_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses and validates a game description.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symnash_game_from_json(
    json: *const c_char,
    out: *mut *mut SymnashGame,
) -> SymnashStatus {
    guard(|| {
        if out.is_null() {
            return fail(SymnashStatus::InvalidArgument, "out is null");
        }
        *out = ptr::null_mut();
        let text = match str_arg(json, "json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match GameFile::from_json(text).and_then(|f| validate_network(&f)) {
            Ok(game) => {
                *out = Box::into_raw(Box::new(SymnashGame { game }));
                SymnashStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `game` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn symnash_game_free(game: *mut SymnashGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Number of players, 0 for a null handle.
///
/// # Safety
/// `game` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symnash_game_players(game: *const SymnashGame) -> usize {
    game.as_ref().map_or(0, |g| g.game.n())
}

/// Game description as JSON; free with `symnash_string_free`.
///
/// # Safety
/// `game` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symnash_game_to_json(game: *const SymnashGame) -> *mut c_char {
    match game.as_ref() {
        Some(g) => CString::new(g.game.to_file().to_json()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// The symmetric game whose symmetric equilibria match `game`'s arbitrary ones.
///
/// # Safety
/// `game` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symnash_desymmetrize(
    game: *const SymnashGame,
    out: *mut *mut SymnashGame,
) -> SymnashStatus {
    guard(|| {
        let (Some(g), false) = (game.as_ref(), out.is_null()) else {
            return fail(SymnashStatus::InvalidArgument, "null argument");
        };
        *out = ptr::null_mut();
        match desymmetrize(&g.game) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(SymnashGame { game: d }));
                SymnashStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

#[allow(clippy::too_many_arguments)]
unsafe fn search(
    game: *const SymnashGame,
    winners: *const usize,
    n_winners: usize,
    losers: *const usize,
    n_losers: usize,
    memory: u32,
    limits: *const SymnashBudget,
    out: *mut *mut SymnashSolution,
    general: bool,
) -> SymnashStatus {
    guard(|| {
        let (Some(g), false) = (game.as_ref(), out.is_null()) else {
            return fail(SymnashStatus::InvalidArgument, "null argument");
        };
        *out = ptr::null_mut();
        if memory == 0 {
            return fail(SymnashStatus::InvalidArgument, "memory must be at least 1");
        }
        let (w, l) = match (players(winners, n_winners), players(losers, n_losers)) {
            (Ok(w), Ok(l)) => (w, l),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let cons = Constraints::new(w.iter().copied(), l.iter().copied());
        let found = Solver::new(&g.game, budget(limits)).and_then(|s| {
            if general {
                s.find_ne_general(&cons, memory)
            } else {
                s.find_symmetric_ne(&cons, memory)
            }
        });
        match found {
            Ok(Some(solution)) => {
                let json = WitnessFile::from_solution(&solution, g.game.arena()).to_json();
                let witness_json = CString::new(json).expect("JSON has no NUL");
                *out = Box::into_raw(Box::new(SymnashSolution { solution, witness_json }));
                SymnashStatus::Ok
            }
            Ok(None) => fail(SymnashStatus::NotFound, "no equilibrium"),
            Err(e) => from_error(e),
        }
    })
}

/// Searches for a symmetric equilibrium with memory `memory` in which the
/// listed players win and lose. `limits` may be null.
///
/// # Safety
/// `game` must be a live handle, the player lists must hold the given number
/// of entries (or be null when empty) and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symnash_find(
    game: *const SymnashGame,
    winners: *const usize,
    n_winners: usize,
    losers: *const usize,
    n_losers: usize,
    memory: u32,
    limits: *const SymnashBudget,
    out: *mut *mut SymnashSolution,
) -> SymnashStatus {
    search(game, winners, n_winners, losers, n_losers, memory, limits, out, false)
}

/// Same as [`symnash_find`] without requiring the profile to be symmetric.
///
/// # Safety
/// As for [`symnash_find`].
#[no_mangle]
pub unsafe extern "C" fn symnash_find_general(
    game: *const SymnashGame,
    winners: *const usize,
    n_winners: usize,
    losers: *const usize,
    n_losers: usize,
    memory: u32,
    limits: *const SymnashBudget,
    out: *mut *mut SymnashSolution,
) -> SymnashStatus {
    search(game, winners, n_winners, losers, n_losers, memory, limits, out, true)
}

/// Checks a witness file. Returns `Ok` on acceptance and `NotFound` on
/// rejection.
///
/// # Safety
/// `game` must be a live handle, `witness_json` NUL-terminated, and the
/// player lists as for [`symnash_find`].
#[no_mangle]
pub unsafe extern "C" fn symnash_check(
    game: *const SymnashGame,
    witness_json: *const c_char,
    winners: *const usize,
    n_winners: usize,
    losers: *const usize,
    n_losers: usize,
    limits: *const SymnashBudget,
) -> SymnashStatus {
    guard(|| {
        let Some(g) = game.as_ref() else {
            return fail(SymnashStatus::InvalidArgument, "game is null");
        };
        let text = match str_arg(witness_json, "witness_json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let (w, l) = match (players(winners, n_winners), players(losers, n_losers)) {
            (Ok(w), Ok(l)) => (w, l),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let cons = Constraints::new(w.iter().copied(), l.iter().copied());
        let checked = Solver::new(&g.game, budget(limits)).and_then(|s| {
            let witness = WitnessFile::from_json(text)?.to_witness(&s)?;
            s.check_witness(&witness, &cons)
        });
        match checked {
            Ok(ProfileCheck::Accept { .. }) => SymnashStatus::Ok,
            Ok(ProfileCheck::Reject { reason, .. }) => {
                fail(SymnashStatus::NotFound, &format!("rejected: {reason:?}"))
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `sol` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn symnash_solution_free(sol: *mut SymnashSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Witness file of the solution. Owned by the handle.
///
/// # Safety
/// `sol` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symnash_solution_witness(sol: *const SymnashSolution) -> *const c_char {
    sol.as_ref().map_or(ptr::null(), |s| s.witness_json.as_ptr())
}

/// 1 if `player` wins in the solution's outcome, 0 otherwise.
///
/// # Safety
/// `sol` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn symnash_solution_is_winner(sol: *const SymnashSolution, player: usize) -> i32 {
    sol.as_ref().map_or(0, |s| i32::from(s.solution.verdict.winners.contains(&player)))
}

/// # Safety
/// `s` must be null or a string returned by this library that has not been
/// freed yet.
#[no_mangle]
pub unsafe extern "C" fn symnash_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
