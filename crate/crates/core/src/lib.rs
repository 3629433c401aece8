//! Exact computer algebra for pre-Lie algebras and their universal envelopes.
//!
//! The crate covers the commutative Oudom-Guin star product on `Sym g`, the
//! Connes-Kreimer product on forests, the PBW isomorphism built degree by
//! degree, the noncommutative star on tensor words over `g + <t>`, the twisted
//! (S-module) versions of all of the above, and the char-p identities relating
//! pre-Lie powers to Zassenhaus polynomials, including the rank computations
//! behind the Cohn counterexample to graded PBW over rings with nilpotents.
//!
//! Everything is exact: coefficients are arbitrary-precision rationals, prime
//! residues, or truncated polynomials over a prime field. No floats anywhere.

pub mod algebras;
pub(crate) mod cursor;
pub mod envelope;
pub mod error;
pub mod expr;
pub mod fplin;
pub mod ghat;
pub mod hopf;
pub mod identities;
pub mod lincomb;
pub mod perm;
pub mod prelie;
pub mod ring;
pub mod smodule;
pub mod tree;
pub mod twisted;
pub mod verify;

pub use envelope::{
    build_phi, check_pbw_action, check_xx_condition, pbw_normalize, ue_multiply, verify_phi,
    MixedElement, PbwActionReport, PhiMap, PhiReport, UElement, Word,
};
pub use error::Error;
pub use expr::{
    format_ghat_comb, format_table_monomial_comb, forest_labels, parse_forest_comb,
    parse_ghat_comb, parse_table_comb, parse_table_monomial_comb, parse_tree_comb, tree_labels,
};
pub use fplin::{flatten, rational_rank, unflatten, FpVectorSpace, TrackingSolver};
pub use ghat::{
    gen_word, ghat_star, ghat_star_peel, ghat_star_words, ghat_words_up_to, project_t_to_one,
    verify_ghat_theorem, GhatElement, GhatLetter, GhatTheoremReport, GhatWord,
};
pub use hopf::{
    ck_forest_product, circ_ext, circ_from_star, coproduct, counit, monomials_up_to_weight, star,
    sym_multiply, verify_star_theorem, StarTheoremReport, SymElement, TensorPair,
};
pub use identities::{
    assoc_commutator, assoc_mul, assoc_pow, cohn_counterexample, expand_bracket_word,
    find_nonrestricted_witness, lambda_p, nonrestricted_witness_in, prelie_power,
    right_action_power, verify_adid, verify_touid, verify_zassenhaus, AssocWord, BracketWord,
    CohnReport, FreeAssocElement, LiePolynomial, NonrestrictedWitness, WitnessKind,
    MAX_TOUID_PRIME, MAX_ZASSENHAUS_PRIME,
};
pub use lincomb::{bilinear, LinComb, SymMonomial, TensorWord};
pub use perm::{block_perm, BlockPermutation, Perm};
pub use prelie::{
    check_prelie_axiom, prelie_defect, random_antisymmetric_bracket, random_bilinear_table,
    AxiomViolation, FreePreLie, JacobiViolation, LieTable, PreLie, TablePreLie,
};
pub use ring::{fp_basis, FpMonomial, RingSpec, Scalar, MAX_FLAT_PRIME};
pub use smodule::{
    beta_apply, check_pltwlie_equivalence, check_twisted_axiom, degree_zero_bracket,
    degree_zero_product, random_graded_op, random_involution_module, smod_tensor, suspend_bracket,
    suspend_circ, suspension_module, tensor_basis, SModule, TwistedAxiom, TwistedBilinearOp,
};
pub use twisted::{
    format_tw_monomial, homogeneous_degree, tw_act_perm, tw_coproduct, tw_monomials_up_to,
    tw_product, twisted_circ, twisted_star, verify_twisted_star, TwElement, TwMonomial,
    TwPairElement, TwistedStarReport,
};
pub use tree::{graft, trees_up_to, trees_with_vertices, Forest, LabeledRootedTree};
pub use verify::{run_suite, CheckOutcome, SuiteConfig, SuiteReport};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
