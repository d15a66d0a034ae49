pub mod algebra;
pub mod braid;
pub mod checks;
pub mod complex;
pub mod hochschild;
pub mod homology;
pub mod oracle;
pub mod soergel;
pub mod yify;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/gradings.md")]
    mod gradings {}
    #[doc = include_str!("../../../book/src/braids.md")]
    mod braids {}
    #[doc = include_str!("../../../book/src/complexes.md")]
    mod complexes {}
    #[doc = include_str!("../../../book/src/homology.md")]
    mod homology {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/checks.md")]
    mod checks {}
}
