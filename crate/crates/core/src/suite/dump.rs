//! Text dumps of single elements, one `coefficient * monomial` per line.

use crate::simplicial::{char_cochain, Model};
use crate::weil::{WeilContext, WoAlgebra};

use super::SuiteError;

/// `c<i>`, `h<i>`, `dh<i>` in W(gl(q)), or `psi<k>` for ψ(h1·c1^q) at level k.
/// Without `q`, the Weil elements use q = i and `psi` uses q = 1.
pub fn dump(element: &str, q: Option<usize>) -> Result<String, SuiteError> {
    let bad = || {
        SuiteError::Usage(format!("unknown element `{element}`; expected c<i>, h<i>, dh<i> or psi<level>"))
    };
    let split = element.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
    let (kind, idx) = element.split_at(split);
    let idx: usize = idx.parse().map_err(|_| bad())?;
    if q == Some(0) {
        return Err(SuiteError::Usage("--q must be at least 1".into()));
    }
    let e = match kind {
        "c" => WeilContext::new(q.unwrap_or(idx.max(1)))?.chern_c(idx)?,
        "h" => WeilContext::new(q.unwrap_or(idx.max(1)))?.transgression_h(idx)?,
        "dh" => {
            let w = WeilContext::new(q.unwrap_or(idx.max(1)))?;
            w.d.apply(&w.transgression_h(idx)?)?
        }
        "psi" => {
            let q = q.unwrap_or(1);
            let text = if q == 1 { "h1*c1".to_string() } else { format!("h1*c1^{q}") };
            let word = WoAlgebra::new(q)?.parse_word(&text)?;
            char_cochain(&word, idx, q, Model::Formal)?.pop().expect("level present").element
        }
        _ => return Err(bad()),
    };
    Ok(e.dump())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dumps() {
        assert_eq!(dump("h1", Some(1)).unwrap(), "1 * 1 * w[1,1]\n");
        assert_eq!(dump("psi1", None).unwrap(), "1 * 1 * a1.0[1,1] ^ a1.1[1,1]\n");
        assert_eq!(dump("psi2", None).unwrap(), "");
        assert_eq!(dump("dh1", Some(2)).unwrap(), dump("c1", Some(2)).unwrap());
        assert!(dump("x1", None).is_err());
        assert!(dump("c2", Some(1)).is_err());
        assert!(dump("c", None).is_err());
    }
}
