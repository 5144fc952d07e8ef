use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// A symbol name. Ordered so that `t` comes first, then `q`, then `sqrt_q`,
/// then every other name in natural order (`a2` before `a10`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Var(Arc<str>);

pub const T: &str = "t";
pub const Q: &str = "q";
pub const SQRT_Q: &str = "sqrt_q";

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn t() -> Self {
        Var::new(T)
    }

    pub fn q() -> Self {
        Var::new(Q)
    }

    pub fn sqrt_q() -> Self {
        Var::new(SQRT_Q)
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    fn rank(&self) -> u8 {
        match &*self.0 {
            T => 0,
            Q => 1,
            SQRT_Q => 2,
            _ => 3,
        }
    }

    /// Accepts identifiers: a letter or underscore followed by letters,
    /// digits or underscores.
    pub fn is_valid_name(name: &str) -> bool {
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if c.is_alphabetic() || c == '_' => {}
            _ => return false,
        }
        chars.all(|c| c.is_alphanumeric() || c == '_')
    }
}

fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut ai, mut bi) = (a.char_indices().peekable(), b.char_indices().peekable());
    loop {
        match (ai.peek().copied(), bi.peek().copied()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((sa, ca)), Some((sb, cb))) => {
                if ca.is_ascii_digit() && cb.is_ascii_digit() {
                    let mut ea = sa;
                    while let Some(&(i, c)) = ai.peek() {
                        if !c.is_ascii_digit() {
                            break;
                        }
                        ea = i + c.len_utf8();
                        ai.next();
                    }
                    let mut eb = sb;
                    while let Some(&(i, c)) = bi.peek() {
                        if !c.is_ascii_digit() {
                            break;
                        }
                        eb = i + c.len_utf8();
                        bi.next();
                    }
                    let da = a[sa..ea].trim_start_matches('0');
                    let db = b[sb..eb].trim_start_matches('0');
                    let ord = da.len().cmp(&db.len()).then_with(|| da.cmp(db));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                    let ord = (ea - sa).cmp(&(eb - sb));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                } else {
                    let ord = ca.cmp(&cb);
                    if ord != Ordering::Equal {
                        return ord;
                    }
                    ai.next();
                    bi.next();
                }
            }
        }
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| natural_cmp(&self.0, &other.0))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}
