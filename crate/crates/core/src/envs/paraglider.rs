use alloc::string::ToString;
use alloc::vec;

use crate::models::MdpModel;

/// Single-step MDP: two mountains (`s1` safe and low, `s2` risky and high)
/// separated by a chasm `s3`.
pub fn build_paraglider() -> MdpModel {
    let row_a1 = vec![0.6, 0.0, 0.4];
    let row_a2 = vec![0.0, 0.4, 0.6];
    MdpModel::new(
        vec!["s1".to_string(), "s2".to_string(), "s3".to_string()],
        vec!["a1".to_string(), "a2".to_string()],
        // the start state is irrelevant; every state uses the same rows
        vec![vec![row_a1.clone(); 3], vec![row_a2.clone(); 3]],
        vec![1.0, 1.5, 0.0],
        1,
    )
    .expect("paraglider model is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::validate_model;

    #[test]
    fn matches_exhibit() {
        let m = build_paraglider();
        assert_eq!(m.transition(0, 0).probs(), &[0.6, 0.0, 0.4]);
        assert_eq!(m.transition(1, 0).probs(), &[0.0, 0.4, 0.6]);
        assert_eq!(m.reward(), &[1.0, 1.5, 0.0]);
        assert_eq!(m.horizon(), 1);
        assert!(validate_model(&m.to_description()).is_valid());
    }
}
