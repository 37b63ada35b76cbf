//! Reference classifiers used in benchmark comparisons.

mod lda;
mod svm;

pub use lda::{train_lda, LdaModel, DEFAULT_LDA_LAMBDA};
pub use svm::{svm_objective, train_linear_svm, SvmModel, DEFAULT_SVM_EPOCHS, DEFAULT_SVM_LAMBDA};
