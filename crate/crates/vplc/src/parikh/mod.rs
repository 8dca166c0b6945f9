//! Parikh images of context-free languages as semilinear sets.

pub mod cfg;
pub mod diophantine;
pub mod image;
pub mod linsolve;
pub mod pda;
pub mod semilinear;

pub use cfg::{Cfg, CfgSym};
pub use diophantine::{intersect, minimal_solutions, some_member};
pub use image::parikh_image;
pub use linsolve::LinearSystem;
pub use pda::{dvpa_to_pda, length_project, pda_to_cfg, Pda, PdaTrans};
pub use semilinear::{
    canon1, from_up_form, includes1, up_form, LinSet, SemilinearSet, UpForm, Vector,
};
