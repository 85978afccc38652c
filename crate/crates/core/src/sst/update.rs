use std::fmt;

use crate::error::{Error, Result};

pub type VarId = usize;

/// A symbol on the right-hand side of an update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    Letter(char),
    Var(VarId),
}

/// A variable update: one image per variable, indexed by [`VarId`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Update {
    images: Vec<Vec<Sym>>,
}

impl Update {
    pub fn new(images: Vec<Vec<Sym>>) -> Self {
        Self { images }
    }

    pub fn identity(vars: usize) -> Self {
        Self {
            images: (0..vars).map(|x| vec![Sym::Var(x)]).collect(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, x: VarId) -> &[Sym] {
        &self.images[x]
    }

    pub fn images(&self) -> &[Vec<Sym>] {
        &self.images
    }

    /// Returns the first variable that occurs twice across all images, if any.
    pub fn copy_violation(&self) -> Option<VarId> {
        first_repeated_var(self.images.iter().flatten(), self.images.len())
    }

    pub fn is_copyless(&self) -> bool {
        self.copy_violation().is_none()
    }

    /// Applies the update morphically to a word over letters and variables.
    pub fn apply(&self, word: &[Sym]) -> Vec<Sym> {
        let mut out = Vec::with_capacity(word.len());
        for sym in word {
            match *sym {
                Sym::Letter(_) => out.push(*sym),
                Sym::Var(y) => out.extend_from_slice(&self.images[y]),
            }
        }
        out
    }

    /// `self` followed by `next`. The image of `X` is `self` applied to
    /// `next(X)`: the variables read by `next` hold the values left by `self`.
    pub fn then(&self, next: &Update) -> Result<Update> {
        if self.num_vars() != next.num_vars() {
            return Err(Error::VariableMismatch {
                left: self.num_vars(),
                right: next.num_vars(),
            });
        }
        Ok(Update {
            images: next.images.iter().map(|img| self.apply(img)).collect(),
        })
    }

    /// Total number of letters across all images.
    pub fn letter_count(&self) -> usize {
        self.images
            .iter()
            .flatten()
            .filter(|s| matches!(s, Sym::Letter(_)))
            .count()
    }

    /// Returns `self^n` for `n >= 1`.
    pub fn power(&self, n: usize) -> Update {
        assert!(n >= 1, "power of an update needs n >= 1");
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.then(self).expect("same variable set");
        }
        acc
    }
}

/// Composes two updates so that `a` is applied first.
pub fn compose_updates(a: &Update, b: &Update) -> Result<Update> {
    a.then(b)
}

pub(crate) fn first_repeated_var<'a>(
    syms: impl Iterator<Item = &'a Sym>,
    vars: usize,
) -> Option<VarId> {
    let mut seen = vec![false; vars];
    for sym in syms {
        if let Sym::Var(x) = *sym {
            if x >= vars || seen[x] {
                return Some(x);
            }
            seen[x] = true;
        }
    }
    None
}

/// Renders a symbol sequence with the given variable names, letters verbatim.
pub fn format_syms(syms: &[Sym], names: &[String]) -> String {
    let parts: Vec<String> = syms
        .iter()
        .map(|s| match *s {
            Sym::Letter(c) => c.to_string(),
            Sym::Var(x) => names[x].clone(),
        })
        .collect();
    parts.join(" ")
}

/// Displays an update with explicit variable names.
pub struct UpdateDisplay<'a> {
    pub update: &'a Update,
    pub names: &'a [String],
}

impl fmt::Display for UpdateDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (x, img) in self.update.images.iter().enumerate() {
            if x > 0 {
                write!(f, " ;")?;
            }
            write!(f, " {} :=", self.names[x])?;
            if !img.is_empty() {
                write!(f, " {}", format_syms(img, self.names))?;
            }
        }
        write!(f, " }}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Sym = Sym::Letter('a');
    const B: Sym = Sym::Letter('b');
    const C: Sym = Sym::Letter('c');
    const X1: Sym = Sym::Var(0);
    const X2: Sym = Sym::Var(1);

    #[test]
    fn compose_appends_then_swaps() {
        let a = Update::new(vec![vec![X1, A], vec![X2]]);
        let b = Update::new(vec![vec![X2, X1], vec![]]);
        let ab = compose_updates(&a, &b).unwrap();
        assert_eq!(ab, Update::new(vec![vec![X2, X1, A], vec![]]));
    }

    #[test]
    fn compose_with_identity() {
        let u = Update::new(vec![vec![A, X2, B], vec![X1, C]]);
        let id = Update::identity(2);
        assert_eq!(compose_updates(&id, &u).unwrap(), u);
        assert_eq!(compose_updates(&u, &id).unwrap(), u);
    }

    #[test]
    fn self_composition_by_hand() {
        let a = Update::new(vec![vec![A, X1, B, X2, C], vec![A]]);
        let aa = compose_updates(&a, &a).unwrap();
        assert_eq!(
            aa,
            Update::new(vec![vec![A, A, X1, B, X2, C, B, A, C], vec![A]])
        );
    }

    #[test]
    fn composition_is_sequential() {
        // swap, then append b to X1: X1 ends with the old X2 followed by b.
        let swap = Update::new(vec![vec![X2], vec![X1, A]]);
        let append = Update::new(vec![vec![X1, B], vec![X2]]);
        let both = compose_updates(&swap, &append).unwrap();
        assert_eq!(both, Update::new(vec![vec![X2, B], vec![X1, A]]));
    }

    #[test]
    fn mismatched_variables() {
        let a = Update::identity(1);
        let b = Update::identity(2);
        assert_eq!(
            compose_updates(&a, &b),
            Err(Error::VariableMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn detects_copies() {
        assert!(!Update::new(vec![vec![X1, X1]]).is_copyless());
        assert_eq!(Update::new(vec![vec![X2], vec![X2]]).copy_violation(), Some(1));
        assert!(Update::new(vec![vec![X2, X1], vec![]]).is_copyless());
    }
}
