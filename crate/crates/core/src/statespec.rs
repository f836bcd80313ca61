//! Text descriptions of input states.
//!
//! ```text
//! fock:<uint>
//! coherent:<re>[+|-<im>i]
//! sup:<w1>*<term1>+<w2>*<term2>...   terms are fock:/coherent:, weights complex
//! file:<path>
//! ```

use std::fmt;
use std::path::PathBuf;

use num_complex::Complex64;

use crate::fock::{min_coherent_dim, TruncatedState, COHERENT_CAPTURE_THRESHOLD, MAX_DIM};
use crate::format::fmt_exact;
use crate::{PhaseError, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    Fock(usize),
    Coherent(Complex64),
    Superposition(Vec<(Complex64, StateSpec)>),
    File(PathBuf),
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        fmt_exact(z.re)
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{sign}{}i", fmt_exact(z.re), fmt_exact(z.im.abs()))
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Fock(n) => write!(f, "fock:{n}"),
            StateSpec::Coherent(a) => write!(f, "coherent:{}", format_complex(*a)),
            StateSpec::File(p) => write!(f, "file:{}", p.display()),
            StateSpec::Superposition(terms) => {
                f.write_str("sup:")?;
                for (i, (w, s)) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{}*{s}", format_complex(*w))?;
                }
                Ok(())
            }
        }
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn peek(&self) -> Option<u8> {
        self.text.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(PhaseError::parse(
                self.pos,
                format!("expected '{}'", c as char),
            ))
        }
    }

    fn error(&self, msg: impl Into<String>) -> PhaseError {
        PhaseError::parse(self.pos, msg)
    }

    /// Decimal float with optional sign and exponent. No inf/nan.
    fn float(&mut self) -> Result<f64> {
        let bytes = self.text.as_bytes();
        let start = self.pos;
        let mut i = self.pos;
        if matches!(bytes.get(i), Some(b'+' | b'-')) {
            i += 1;
        }
        let digits_start = i;
        while matches!(bytes.get(i), Some(b'0'..=b'9')) {
            i += 1;
        }
        let mut mantissa_digits = i - digits_start;
        if bytes.get(i) == Some(&b'.') {
            i += 1;
            let frac_start = i;
            while matches!(bytes.get(i), Some(b'0'..=b'9')) {
                i += 1;
            }
            mantissa_digits += i - frac_start;
        }
        if mantissa_digits == 0 {
            return Err(PhaseError::parse(start, "expected a number"));
        }
        if matches!(bytes.get(i), Some(b'e' | b'E')) {
            let mut j = i + 1;
            if matches!(bytes.get(j), Some(b'+' | b'-')) {
                j += 1;
            }
            let exp_start = j;
            while matches!(bytes.get(j), Some(b'0'..=b'9')) {
                j += 1;
            }
            if j > exp_start {
                i = j;
            }
        }
        let value: f64 = self.text[start..i]
            .parse()
            .map_err(|_| PhaseError::parse(start, "malformed number"))?;
        if !value.is_finite() {
            return Err(PhaseError::parse(start, "number out of range"));
        }
        self.pos = i;
        Ok(value)
    }

    fn uint(&mut self) -> Result<usize> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(PhaseError::parse(start, "expected a non-negative integer"));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| PhaseError::parse(start, "integer out of range"))
    }

    /// `<re>[+|-<im>i]` or a bare `<im>i`. An imaginary part is only taken
    /// when the number is followed by `i`, so `1+2*fock:0` leaves `+2*…`.
    fn complex(&mut self) -> Result<Complex64> {
        let first = self.float()?;
        if self.eat(b'i') {
            return Ok(Complex64::new(0.0, first));
        }
        if matches!(self.peek(), Some(b'+' | b'-')) {
            let save = self.pos;
            if let Ok(im) = self.float() {
                if self.eat(b'i') {
                    return Ok(Complex64::new(first, im));
                }
            }
            self.pos = save;
        }
        Ok(Complex64::new(first, 0.0))
    }

    fn kind(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'a'..=b'z')) {
            self.pos += 1;
        }
        let kind = &self.text[start..self.pos];
        if !self.eat(b':') {
            return Err(PhaseError::parse(self.pos, "expected '<kind>:'"));
        }
        Ok(kind)
    }

    fn term(&mut self) -> Result<StateSpec> {
        let at = self.pos;
        match self.kind()? {
            "fock" => Ok(StateSpec::Fock(self.uint()?)),
            "coherent" => Ok(StateSpec::Coherent(self.complex()?)),
            other => Err(PhaseError::parse(
                at,
                format!("'{other}' is not allowed inside a superposition"),
            )),
        }
    }
}

/// Parses a state description. Errors carry the byte offset of the problem.
pub fn parse_state_spec(text: &str) -> Result<StateSpec> {
    let mut cur = Cursor { text, pos: 0 };
    let kind_pos = cur.pos;
    let spec = match cur.kind()? {
        "fock" => StateSpec::Fock(cur.uint()?),
        "coherent" => StateSpec::Coherent(cur.complex()?),
        "file" => {
            let path = cur.rest();
            if path.is_empty() {
                return Err(cur.error("empty file path"));
            }
            cur.pos = text.len();
            StateSpec::File(PathBuf::from(path))
        }
        "sup" => {
            let mut terms = Vec::new();
            loop {
                let negate = !terms.is_empty() && cur.peek() == Some(b'-');
                if !terms.is_empty() && !negate {
                    cur.expect(b'+')?;
                }
                if negate {
                    cur.pos += 1;
                }
                let mut weight = cur.complex()?;
                if negate {
                    weight = -weight;
                }
                cur.expect(b'*')?;
                let term = cur.term()?;
                terms.push((weight, term));
                if cur.peek().is_none() {
                    break;
                }
            }
            StateSpec::Superposition(terms)
        }
        other => {
            return Err(PhaseError::parse(
                kind_pos,
                format!("unknown state kind '{other}' (expected fock, coherent, sup or file)"),
            ))
        }
    };
    if cur.peek().is_some() {
        return Err(cur.error(format!("unexpected trailing input '{}'", cur.rest())));
    }
    Ok(spec)
}

impl StateSpec {
    /// Smallest dimension that holds the state (file states are read).
    pub fn natural_dim(&self) -> Result<usize> {
        Ok(match self {
            StateSpec::Fock(n) if *n < MAX_DIM => n + 1,
            StateSpec::Fock(n) => {
                return Err(PhaseError::dimension(format!(
                    "number state |{n}> needs more than {MAX_DIM} levels"
                )))
            }
            StateSpec::Coherent(a) => {
                min_coherent_dim(*a, COHERENT_CAPTURE_THRESHOLD).ok_or_else(|| {
                    PhaseError::dimension(format!(
                        "coherent state {} needs more than {MAX_DIM} levels",
                        format_complex(*a)
                    ))
                })?
            }
            StateSpec::File(p) => self.load_file(p)?.dim(),
            StateSpec::Superposition(terms) => {
                let mut dim = 1;
                for (_, t) in terms {
                    dim = dim.max(t.natural_dim()?);
                }
                dim
            }
        })
    }

    fn load_file(&self, path: &PathBuf) -> Result<TruncatedState> {
        let text = std::fs::read_to_string(path).map_err(|e| PhaseError::io(path, e))?;
        TruncatedState::from_json_str(&text, format!("file:{}", path.display()))
    }

    /// Builds the state in dimension `dim`; `force` accepts lossy coherent
    /// truncations.
    pub fn materialize(&self, dim: usize, force: bool) -> Result<TruncatedState> {
        match self {
            StateSpec::Fock(n) => TruncatedState::fock(*n, dim),
            StateSpec::Coherent(a) => TruncatedState::coherent_with(*a, dim, force),
            StateSpec::File(p) => {
                let s = self.load_file(p)?;
                s.embed(dim)
            }
            StateSpec::Superposition(terms) => {
                if terms.is_empty() {
                    return Err(PhaseError::validation("empty superposition"));
                }
                let mut amps = vec![Complex64::new(0.0, 0.0); dim];
                for (w, t) in terms {
                    let part = t.materialize(dim, force)?;
                    for (acc, &c) in amps.iter_mut().zip(part.amplitudes()) {
                        *acc += w * c;
                    }
                }
                TruncatedState::from_amplitudes(amps, self.to_string())
            }
        }
        .map(|s| s.with_label(self.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grammar_examples() {
        assert_eq!(parse_state_spec("fock:3").unwrap(), StateSpec::Fock(3));
        assert_eq!(
            parse_state_spec("coherent:1.5-0.5i").unwrap(),
            StateSpec::Coherent(Complex64::new(1.5, -0.5))
        );
        assert_eq!(
            parse_state_spec("coherent:2").unwrap(),
            StateSpec::Coherent(Complex64::new(2.0, 0.0))
        );
        assert_eq!(
            parse_state_spec("coherent:-1e-1+2E1i").unwrap(),
            StateSpec::Coherent(Complex64::new(-0.1, 20.0))
        );
        let sup = parse_state_spec("sup:1*fock:0+1*fock:1").unwrap();
        let s = sup.materialize(4, false).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0].re - h).abs() < 1e-15);
        assert!((s.amplitudes()[1].re - h).abs() < 1e-15);
        assert_eq!(sup.to_string(), "sup:1*fock:0+1*fock:1");
    }

    #[test]
    fn superposition_with_complex_weights_and_coherent_terms() {
        let spec = parse_state_spec("sup:0.5+0.5i*coherent:1+0.5i-2*fock:1").unwrap();
        match &spec {
            StateSpec::Superposition(t) => {
                assert_eq!(t.len(), 2);
                assert_eq!(t[0].0, Complex64::new(0.5, 0.5));
                assert_eq!(t[0].1, StateSpec::Coherent(Complex64::new(1.0, 0.5)));
                assert_eq!(t[1].0, Complex64::new(-2.0, 0.0));
            }
            _ => panic!(),
        }
        assert_eq!(spec.to_string(), "sup:0.5+0.5i*coherent:1+0.5i+-2*fock:1");
        assert_eq!(parse_state_spec(&spec.to_string()).unwrap(), spec);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_state_spec("fock:x") {
            Err(PhaseError::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        match parse_state_spec("squeezed:1") {
            Err(PhaseError::Parse { pos, msg }) => {
                assert_eq!(pos, 0);
                assert!(msg.contains("squeezed"));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_state_spec("fock:3junk").is_err());
        assert!(parse_state_spec("sup:1*sup:1*fock:0").is_err());
        assert!(parse_state_spec("sup:").is_err());
        assert!(parse_state_spec("coherent:inf").is_err());
        assert!(parse_state_spec("file:").is_err());
        assert!(parse_state_spec("").is_err());
    }

    #[test]
    fn zero_superposition_is_rejected() {
        let spec = parse_state_spec("sup:1*fock:0+-1*fock:0").unwrap();
        assert!(spec.materialize(2, false).is_err());
    }

    proptest! {
        #[test]
        fn format_is_idempotent(re in -1e3f64..1e3, im in -1e3f64..1e3, n in 0usize..100, w in -5.0f64..5.0) {
            for spec in [
                StateSpec::Coherent(Complex64::new(re, im)),
                StateSpec::Fock(n),
                StateSpec::Superposition(vec![
                    (Complex64::new(w, im), StateSpec::Fock(n)),
                    (Complex64::new(re, -w), StateSpec::Coherent(Complex64::new(im, re))),
                ]),
            ] {
                let once = parse_state_spec(&spec.to_string()).unwrap();
                prop_assert_eq!(&once, &spec);
                prop_assert_eq!(once.to_string(), spec.to_string());
            }
        }

        #[test]
        fn parser_never_panics(s in "\\PC{0,40}") {
            let _ = parse_state_spec(&s);
        }
    }
}
