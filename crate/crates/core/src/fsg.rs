//! k-account finite-state gamblers and the s-gales they induce.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bits::Bit;
use crate::error::{Error, Result};
use crate::exact::{halves, Surd};
use crate::gale::{Capital, GaleKind, SGale};
use crate::logspace::log2_sum;
use crate::rational::{to_f64, Rat};
use crate::tail_window;

/// Shortest prefix accepted by [`success_exponent_search`].
pub const MIN_SEARCH_PREFIX: usize = 64;
/// Bisection tolerance of [`success_exponent_search`].
pub const SEARCH_TOLERANCE: f64 = 1e-3;
/// Required growth, in bits over the initial capital.
pub const SUCCESS_MARGIN: f64 = 1.0;

#[derive(Clone, Debug)]
pub struct Account {
    /// `bets[q] = [bet on 0, bet on 1]`.
    pub bets: Vec<[BigRational; 2]>,
    pub initial_capital: BigRational,
}

#[derive(Clone, Debug)]
pub struct FiniteStateGambler {
    states: Vec<String>,
    transition: Vec<[usize; 2]>,
    initial_state: usize,
    accounts: Vec<Account>,
    /// `log2` of every bet, `[account][state][bit]`.
    log_bets: Vec<Vec<[f64; 2]>>,
}

impl FiniteStateGambler {
    /// Checks totality of the transition table and that every account's bets
    /// are in `[0, 1]` and sum to exactly 1 at every state.
    pub fn new(
        states: Vec<String>,
        transition: Vec<[usize; 2]>,
        initial_state: usize,
        accounts: Vec<Account>,
    ) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Structural("gambler has no states".into()));
        }
        if transition.len() != states.len() {
            return Err(Error::Structural(format!(
                "transition table has {} rows for {} states",
                transition.len(),
                states.len()
            )));
        }
        for (q, row) in transition.iter().enumerate() {
            if let Some(t) = row.iter().find(|&&t| t >= states.len()) {
                return Err(Error::Structural(format!(
                    "state {:?} moves to unknown state index {t}",
                    states[q]
                )));
            }
        }
        if initial_state >= states.len() {
            return Err(Error::Structural(format!(
                "unknown initial state index {initial_state}"
            )));
        }
        if accounts.is_empty() {
            return Err(Error::Structural("gambler has no accounts".into()));
        }
        for (i, account) in accounts.iter().enumerate() {
            if account.bets.len() != states.len() {
                return Err(Error::Structural(format!(
                    "account {} has bets for {} of {} states",
                    i + 1,
                    account.bets.len(),
                    states.len()
                )));
            }
            if account.initial_capital.is_negative() {
                return Err(Error::Domain(format!(
                    "account {} has negative initial capital {}",
                    i + 1,
                    account.initial_capital
                )));
            }
            for (q, [b0, b1]) in account.bets.iter().enumerate() {
                let node = format!("state {:?}, account {}", states[q], i + 1);
                if b0.is_negative() || b1.is_negative() {
                    return Err(Error::MalformedRule {
                        node,
                        detail: format!("negative bet in ({b0}, {b1})"),
                    });
                }
                let total = b0 + b1;
                if !total.is_one() {
                    return Err(Error::MalformedRule {
                        node,
                        detail: format!("bets {b0} + {b1} = {total}, expected 1"),
                    });
                }
            }
        }
        let log_bets = accounts
            .iter()
            .map(|a| {
                a.bets
                    .iter()
                    .map(|[b0, b1]| [to_f64(b0).log2(), to_f64(b1).log2()])
                    .collect()
            })
            .collect();
        Ok(FiniteStateGambler {
            states,
            transition,
            initial_state,
            accounts,
            log_bets,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn accounts(&self) -> &[Account] {
        &self.accounts
    }

    pub fn initial_state(&self) -> usize {
        self.initial_state
    }

    pub fn step(&self, q: usize, b: Bit) -> usize {
        self.transition[q][b as usize]
    }

    /// `delta*(w)`.
    pub fn run_state(&self, w: &[Bit]) -> usize {
        w.iter().fold(self.initial_state, |q, &b| self.step(q, b))
    }

    /// Same automaton with every account replicated `k` times, each copy
    /// holding `1/k` of the original capital.
    pub fn copies(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("need at least one copy".into()));
        }
        let share = BigRational::new(1.into(), k.into());
        let accounts = self
            .accounts
            .iter()
            .flat_map(|a| {
                let share = share.clone();
                (0..k).map(move |_| Account {
                    bets: a.bets.clone(),
                    initial_capital: &a.initial_capital * &share,
                })
            })
            .collect();
        FiniteStateGambler::new(
            self.states.clone(),
            self.transition.clone(),
            self.initial_state,
            accounts,
        )
    }

    /// `log2` of the total initial capital.
    pub fn log_initial(&self) -> f64 {
        log2_sum(
            self.accounts
                .iter()
                .map(|a| to_f64(&a.initial_capital).log2()),
        )
    }

    /// `log2 sum_i c_i prod_j bet(i, q_j, w_j)`, i.e. the induced capital with
    /// the `2^{s n}` factor removed, for every prefix length.
    pub fn log_growth(&self, prefix: &[Bit]) -> Vec<f64> {
        let mut per_account: Vec<f64> = self
            .accounts
            .iter()
            .map(|a| to_f64(&a.initial_capital).log2())
            .collect();
        let mut out = Vec::with_capacity(prefix.len() + 1);
        out.push(log2_sum(per_account.iter().copied()));
        let mut q = self.initial_state;
        for &b in prefix {
            for (l, logs) in per_account.iter_mut().zip(&self.log_bets) {
                *l += logs[q][b as usize];
            }
            out.push(log2_sum(per_account.iter().copied()));
            q = self.step(q, b);
        }
        out
    }

    /// Exact per-account capitals at `s = 0`.
    pub fn account_products(&self, w: &[Bit]) -> Vec<BigRational> {
        let mut products: Vec<BigRational> = self
            .accounts
            .iter()
            .map(|a| a.initial_capital.clone())
            .collect();
        let mut q = self.initial_state;
        for &b in w {
            for (p, a) in products.iter_mut().zip(&self.accounts) {
                if !p.is_zero() {
                    *p *= &a.bets[q][b as usize];
                }
            }
            q = self.step(q, b);
        }
        products
    }
}

#[derive(Debug)]
struct FsgCapital {
    gambler: Arc<FiniteStateGambler>,
    s: f64,
    s_halves: Option<i64>,
}

impl Capital for FsgCapital {
    fn log_capital(&self, w: &[Bit]) -> Result<f64> {
        Ok(*self.log_capitals_along(w)?.last().expect("nonempty trace"))
    }

    fn exact_capital(&self, w: &[Bit]) -> Result<Option<Surd>> {
        let Some(h) = self.s_halves else {
            return Ok(None);
        };
        let total: BigRational = self.gambler.account_products(w).into_iter().sum();
        Ok(Some(&Surd::pow2_halves(h * w.len() as i64) * &total))
    }

    fn log_capitals_along(&self, prefix: &[Bit]) -> Result<Vec<f64>> {
        let mut logs = self.gambler.log_growth(prefix);
        for (n, l) in logs.iter_mut().enumerate() {
            *l += self.s * n as f64;
        }
        Ok(logs)
    }
}

/// `d_G^(s) = sum_i d_{G,i}^(s)` with `d_{G,i}(wb) = 2^s d_{G,i}(w) bet(i, delta*(w), b)`.
pub fn induced_gale(gambler: &FiniteStateGambler, s: f64) -> Result<SGale> {
    let capital = FsgCapital {
        gambler: Arc::new(gambler.clone()),
        s,
        s_halves: halves(s),
    };
    SGale::new(s, GaleKind::Gale, Arc::new(capital))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuccessMode {
    /// Capital exceeds the margin somewhere in the window.
    Io,
    /// Capital exceeds the margin everywhere in the window.
    Ae,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuccessEstimate {
    pub mode: SuccessMode,
    pub threshold: f64,
    pub window: (usize, usize),
    /// False when even `s = 1` does not reach the margin; the threshold is then 1.
    pub reached: bool,
}

/// Least `s` in `[0, 1]` whose induced s-gale gains [`SUCCESS_MARGIN`] bits
/// over its initial capital in the tail window, to within [`SEARCH_TOLERANCE`].
pub fn success_exponent_search(
    gambler: &FiniteStateGambler,
    prefix: &[Bit],
    mode: SuccessMode,
) -> Result<SuccessEstimate> {
    let window = tail_window(prefix.len());
    success_exponent_search_in(gambler, prefix, mode, window)
}

pub fn success_exponent_search_in(
    gambler: &FiniteStateGambler,
    prefix: &[Bit],
    mode: SuccessMode,
    window: (usize, usize),
) -> Result<SuccessEstimate> {
    if prefix.len() < MIN_SEARCH_PREFIX {
        return Err(Error::Precondition(format!(
            "prefix has {} bits, need at least {MIN_SEARCH_PREFIX}",
            prefix.len()
        )));
    }
    if window.0 > window.1 || window.1 > prefix.len() || window.1 == 0 {
        return Err(Error::Domain(format!(
            "bad window {window:?} for length {}",
            prefix.len()
        )));
    }
    if gambler.accounts.iter().all(|a| a.initial_capital.is_zero()) {
        return Err(Error::Domain("all initial capitals are zero".into()));
    }
    let growth = gambler.log_growth(prefix);
    let target = growth[0] + SUCCESS_MARGIN;
    let start = window.0.max(1);
    let succeeds = |s: f64| {
        let mut values = (start..=window.1).map(|n| growth[n] + s * n as f64);
        match mode {
            SuccessMode::Io => values.any(|v| v >= target),
            SuccessMode::Ae => values.all(|v| v >= target),
        }
    };
    if succeeds(0.0) {
        return Ok(SuccessEstimate {
            mode,
            threshold: 0.0,
            window,
            reached: true,
        });
    }
    if !succeeds(1.0) {
        return Ok(SuccessEstimate {
            mode,
            threshold: 1.0,
            window,
            reached: false,
        });
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > SEARCH_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if succeeds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(SuccessEstimate {
        mode,
        threshold: hi,
        window,
        reached: true,
    })
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn fair_pair(bet0: &BigRational) -> [BigRational; 2] {
    [bet0.clone(), BigRational::one() - bet0]
}

fn single_account(
    states: Vec<String>,
    transition: Vec<[usize; 2]>,
    bets: Vec<[BigRational; 2]>,
) -> Result<FiniteStateGambler> {
    let account = Account {
        bets,
        initial_capital: BigRational::one(),
    };
    FiniteStateGambler::new(states, transition, 0, vec![account])
}

/// One state, betting `bet0` on 0 and `1 - bet0` on 1.
pub fn constant_gambler(bet0: BigRational) -> Result<FiniteStateGambler> {
    single_account(vec!["q".into()], vec![[0, 0]], vec![fair_pair(&bet0)])
}

/// Stakes everything on `bit` at every step.
pub fn always_bet(bit: Bit) -> Result<FiniteStateGambler> {
    constant_gambler(if bit == 0 {
        BigRational::one()
    } else {
        BigRational::zero()
    })
}

/// Two states tracking the parity of ones seen, with a bet on 0 for each.
pub fn parity_gambler(bet0_even: BigRational, bet0_odd: BigRational) -> Result<FiniteStateGambler> {
    single_account(
        vec!["even".into(), "odd".into()],
        vec![[0, 1], [1, 0]],
        vec![fair_pair(&bet0_even), fair_pair(&bet0_odd)],
    )
}

/// States are the last `order` bits (zero-padded at the start); `bets0[q]` is
/// the bet on 0 in the state whose context has binary value `q`.
pub fn context_gambler(order: u32, bets0: &[BigRational]) -> Result<FiniteStateGambler> {
    if order > 8 {
        return Err(Error::Domain(format!("context order {order} is above 8")));
    }
    let count = 1usize << order;
    if bets0.len() != count {
        return Err(Error::Structural(format!(
            "order {order} needs {count} bets, got {}",
            bets0.len()
        )));
    }
    let (states, transition) = context_automaton(order);
    single_account(states, transition, bets0.iter().map(fair_pair).collect())
}

fn context_automaton(order: u32) -> (Vec<String>, Vec<[usize; 2]>) {
    let count = 1usize << order;
    let mask = count - 1;
    let states = (0..count)
        .map(|q| {
            if order == 0 {
                "ctx".to_string()
            } else {
                format!("ctx{q:0width$b}", width = order as usize)
            }
        })
        .collect();
    let transition = (0..count)
        .map(|q| [(q << 1) & mask, ((q << 1) | 1) & mask])
        .collect();
    (states, transition)
}

/// Order-`order` context automaton with one account per assignment of a
/// grid value to every state, capitals split evenly.
pub fn context_grid(order: u32, grid: &[BigRational]) -> Result<FiniteStateGambler> {
    if grid.is_empty() {
        return Err(Error::Domain("empty bet grid".into()));
    }
    let count = 1usize << order;
    let combos = (grid.len() as f64).powi(count as i32);
    if combos > 4096.0 {
        return Err(Error::Resource(format!("{combos} accounts exceeds 4096")));
    }
    let combos = combos as usize;
    let share = ratio(1, combos as i64);
    let (states, transition) = context_automaton(order);
    let accounts = (0..combos)
        .map(|mut code| {
            let bets = (0..count)
                .map(|_| {
                    let pick = &grid[code % grid.len()];
                    code /= grid.len();
                    fair_pair(pick)
                })
                .collect();
            Account {
                bets,
                initial_capital: share.clone(),
            }
        })
        .collect();
    FiniteStateGambler::new(states, transition, 0, accounts)
}

/// `{1/8, 2/8, ..., 7/8}`.
pub fn eighths() -> Vec<BigRational> {
    (1..8).map(|k| ratio(k, 8)).collect()
}

/// Named gamblers used by default dimension estimates.
pub fn standard_library() -> Vec<(String, FiniteStateGambler)> {
    let quarters: Vec<BigRational> = (1..4).map(|k| ratio(k, 4)).collect();
    let mut out = vec![
        ("order0-eighths".to_string(), context_grid(0, &eighths())),
        ("order1-eighths".to_string(), context_grid(1, &eighths())),
        ("order2-quarters".to_string(), context_grid(2, &quarters)),
        ("always0".to_string(), always_bet(0)),
        ("always1".to_string(), always_bet(1)),
    ];
    out.extend((1..8).map(|k| (format!("constant{k}/8"), constant_gambler(ratio(k, 8)))));
    out.into_iter()
        .map(|(name, g)| (name, g.expect("library gamblers are well formed")))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccountSpec {
    pub initial_capital: Rat,
    /// State name to `[bet on 0, bet on 1]`.
    pub bets: BTreeMap<String, [Rat; 2]>,
}

/// JSON form: states by name, transitions as `[next on 0, next on 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FsgSpec {
    pub states: Vec<String>,
    pub initial_state: String,
    pub transition: BTreeMap<String, [String; 2]>,
    pub accounts: Vec<AccountSpec>,
}

impl FsgSpec {
    pub fn build(&self) -> Result<FiniteStateGambler> {
        let index: HashMap<&str, usize> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, q)| (q.as_str(), i))
            .collect();
        if index.len() != self.states.len() {
            return Err(Error::Structural("duplicate state names".into()));
        }
        let lookup = |name: &str, context: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::Structural(format!("unknown state {name:?} in {context}")))
        };
        if let Some(extra) = self
            .transition
            .keys()
            .find(|q| !index.contains_key(q.as_str()))
        {
            return Err(Error::Structural(format!(
                "transition for unknown state {extra:?}"
            )));
        }
        let transition =
            self.states
                .iter()
                .map(|q| {
                    let [t0, t1] = self.transition.get(q).ok_or_else(|| {
                        Error::Structural(format!("state {q:?} has no transitions"))
                    })?;
                    Ok([lookup(t0, "transition")?, lookup(t1, "transition")?])
                })
                .collect::<Result<Vec<_>>>()?;
        let accounts = self
            .accounts
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if let Some(extra) = a.bets.keys().find(|q| !index.contains_key(q.as_str())) {
                    return Err(Error::Structural(format!(
                        "account {} bets in unknown state {extra:?}",
                        i + 1
                    )));
                }
                let bets = self
                    .states
                    .iter()
                    .map(|q| {
                        let [b0, b1] = a.bets.get(q).ok_or_else(|| {
                            Error::Structural(format!(
                                "account {} has no bets in state {q:?}",
                                i + 1
                            ))
                        })?;
                        Ok([b0.0.clone(), b1.0.clone()])
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Account {
                    bets,
                    initial_capital: a.initial_capital.0.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let initial = lookup(&self.initial_state, "initial_state")?;
        FiniteStateGambler::new(self.states.clone(), transition, initial, accounts)
    }

    pub fn from_gambler(g: &FiniteStateGambler) -> Self {
        let transition = g
            .states
            .iter()
            .zip(&g.transition)
            .map(|(q, [t0, t1])| (q.clone(), [g.states[*t0].clone(), g.states[*t1].clone()]))
            .collect();
        let accounts = g
            .accounts
            .iter()
            .map(|a| AccountSpec {
                initial_capital: Rat(a.initial_capital.clone()),
                bets: g
                    .states
                    .iter()
                    .zip(&a.bets)
                    .map(|(q, [b0, b1])| (q.clone(), [Rat(b0.clone()), Rat(b1.clone())]))
                    .collect(),
            })
            .collect();
        FsgSpec {
            states: g.states.clone(),
            initial_state: g.states[g.initial_state].clone(),
            transition,
            accounts,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{parse_bits, strings_of_length};
    use crate::gale::{evaluate, validate, ValidationMode};
    use proptest::prelude::*;

    fn bits(s: &str) -> Vec<Bit> {
        parse_bits(s).unwrap()
    }

    #[test]
    fn run_state_examples() {
        let g = parity_gambler(ratio(1, 2), ratio(1, 2)).unwrap();
        assert_eq!(g.run_state(&[]), 0);
        assert_eq!(g.run_state(&bits("101")), 0);
        assert_eq!(g.run_state(&bits("111")), 1);
        assert_eq!(g.run_state(&bits("1000")), 1);
        let c = constant_gambler(ratio(1, 3)).unwrap();
        assert_eq!(c.run_state(&bits("0110101")), 0);
    }

    #[test]
    fn fair_gambler_induces_constant_martingale() {
        let d = induced_gale(&constant_gambler(ratio(1, 2)).unwrap(), 1.0).unwrap();
        for w in strings_of_length(5) {
            assert_eq!(d.exact_capital(&w).unwrap(), Some(Surd::one()));
        }
    }

    #[test]
    fn always_zero_doubles_or_dies() {
        let d = induced_gale(&always_bet(0).unwrap(), 1.0).unwrap();
        assert_eq!(
            d.exact_capital(&bits("00")).unwrap(),
            Some(Surd::from_rational(ratio(4, 1)))
        );
        assert_eq!(d.exact_capital(&bits("01")).unwrap(), Some(Surd::zero()));
        assert_eq!(d.log_capital(&bits("00")).unwrap(), 2.0);
        assert_eq!(d.log_capital(&bits("01")).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn total_is_sum_of_accounts() {
        let g = context_grid(1, &[ratio(1, 3), ratio(3, 4)]).unwrap();
        assert_eq!(g.accounts().len(), 4);
        let d = induced_gale(&g, 0.5).unwrap();
        let w = bits("0110100");
        let accounts: BigRational = g.account_products(&w).into_iter().sum();
        let by_hand = &Surd::pow2_halves(w.len() as i64) * &accounts;
        assert_eq!(d.exact_capital(&w).unwrap().unwrap(), by_hand);
        let logs = d.log_capitals_along(&w).unwrap();
        assert!((logs[w.len()] - by_hand.log2()).abs() < 1e-12);
    }

    #[test]
    fn bad_bets_name_state_and_account() {
        let spec = r#"{
            "states": ["a", "b"],
            "initial_state": "a",
            "transition": {"a": ["a", "b"], "b": ["b", "a"]},
            "accounts": [
                {"initial_capital": "1", "bets": {"a": ["1/2", "1/2"], "b": ["1/2", "1/2"]}},
                {"initial_capital": "1/2", "bets": {"a": ["1/2", "1/2"], "b": ["1/2", "2/5"]}}
            ]
        }"#;
        let spec: FsgSpec = serde_json::from_str(spec).unwrap();
        let err = spec.build().unwrap_err().to_string();
        assert!(
            err.contains("state \\\"b\\\", account 2") || err.contains("state \"b\", account 2"),
            "{err}"
        );
        assert!(err.contains("9/10"), "{err}");
    }

    #[test]
    fn spec_round_trip() {
        let g = parity_gambler(ratio(1, 4), ratio(2, 3)).unwrap();
        let spec = FsgSpec::from_gambler(&g);
        let json = serde_json::to_string(&spec).unwrap();
        let back: FsgSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        let rebuilt = back.build().unwrap();
        let w = bits("1101001");
        assert_eq!(rebuilt.account_products(&w), g.account_products(&w));
    }

    #[test]
    fn missing_transition_is_structural() {
        let spec = r#"{"states": ["a"], "initial_state": "a", "transition": {},
            "accounts": [{"initial_capital": "1", "bets": {"a": ["1", "0"]}}]}"#;
        let spec: FsgSpec = serde_json::from_str(spec).unwrap();
        assert!(matches!(spec.build(), Err(Error::Structural(_))));
    }

    #[test]
    fn search_on_zeros() {
        let g = always_bet(0).unwrap();
        let zeros = vec![0u8; 1024];
        let io = success_exponent_search(&g, &zeros, SuccessMode::Io).unwrap();
        let ae = success_exponent_search(&g, &zeros, SuccessMode::Ae).unwrap();
        assert!(io.threshold <= 0.05);
        assert!(ae.threshold <= 0.05);
        assert!(ae.threshold >= io.threshold);
        let short = success_exponent_search(&g, &zeros[..256], SuccessMode::Ae).unwrap();
        assert!(short.threshold >= ae.threshold);
    }

    #[test]
    fn fair_gambler_threshold_is_one() {
        let g = constant_gambler(ratio(1, 2)).unwrap();
        let w: Vec<Bit> = (0..200).map(|i| ((i * 7) % 3 == 0) as Bit).collect();
        let r = success_exponent_search(&g, &w, SuccessMode::Io).unwrap();
        assert!((r.threshold - 1.0).abs() <= SEARCH_TOLERANCE);
    }

    #[test]
    fn search_errors() {
        let g = always_bet(0).unwrap();
        assert!(matches!(
            success_exponent_search(&g, &[0; 10], SuccessMode::Io),
            Err(Error::Precondition(_))
        ));
        let broke = FiniteStateGambler::new(
            vec!["q".into()],
            vec![[0, 0]],
            0,
            vec![Account {
                bets: vec![fair_pair(&ratio(1, 2))],
                initial_capital: BigRational::zero(),
            }],
        )
        .unwrap();
        assert!(matches!(
            success_exponent_search(&broke, &[0; 100], SuccessMode::Io),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn trace_matches_growth_plus_exponent() {
        let g = parity_gambler(ratio(1, 5), ratio(5, 7)).unwrap();
        let w = bits("10110111000101");
        let d = induced_gale(&g, 0.3).unwrap();
        let t = evaluate(&d, &w).unwrap();
        let growth = g.log_growth(&w);
        for n in 0..=w.len() {
            assert!((t.log_capitals[n] - growth[n] - 0.3 * n as f64).abs() < 1e-12);
        }
    }

    fn gambler_strategy() -> impl Strategy<Value = FiniteStateGambler> {
        (1usize..4, 1usize..3).prop_flat_map(|(states, accounts)| {
            (
                prop::collection::vec((0..states, 0..states), states),
                prop::collection::vec(prop::collection::vec(0i64..=12, states), accounts),
                prop::collection::vec(0i64..5, accounts),
            )
                .prop_map(move |(trans, bets, caps)| {
                    let names = (0..states).map(|q| format!("q{q}")).collect();
                    let transition = trans.into_iter().map(|(a, b)| [a, b]).collect();
                    let mut accounts: Vec<Account> = bets
                        .into_iter()
                        .zip(caps)
                        .map(|(bs, c)| Account {
                            bets: bs.iter().map(|&b| fair_pair(&ratio(b, 12))).collect(),
                            initial_capital: ratio(c, 4),
                        })
                        .collect();
                    accounts[0].initial_capital += ratio(1, 4);
                    FiniteStateGambler::new(names, transition, 0, accounts).unwrap()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn induced_gales_validate_exactly(g in gambler_strategy(), h in 0i64..5) {
            let d = induced_gale(&g, h as f64 / 2.0).unwrap();
            let r = validate(&d, 8).unwrap();
            prop_assert_eq!(r.mode, ValidationMode::Exact);
            prop_assert!(r.passed);
            prop_assert_eq!(r.worst_violation, 0.0);
        }

        #[test]
        fn strong_success_needs_more(g in gambler_strategy(), w in prop::collection::vec(0u8..2, 64..300)) {
            let io = success_exponent_search(&g, &w, SuccessMode::Io).unwrap();
            let ae = success_exponent_search(&g, &w, SuccessMode::Ae).unwrap();
            prop_assert!(ae.threshold >= io.threshold);
        }
    }
}
