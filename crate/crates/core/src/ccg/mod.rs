//! CCG derivations: categories, AUTO-format ingestion and conversion to
//! pregroup diagrams.

mod auto;
mod category;
mod convert;
mod tree;

pub use auto::{parse_auto, parse_auto_entries, parse_derivation, to_auto, AutoEntry};
pub use category::Category;
pub use convert::{cat_to_typeseq, tree_to_diagram, LEX_TOKEN};
pub use tree::{CcgTree, Rule};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Generator;
    use crate::pregroup::{AtomicType, PType, TypeSeq};
    use alloc::vec;
    use alloc::vec::Vec;

    fn n(z: i32) -> PType {
        PType::new(AtomicType::n(), z)
    }
    fn s(z: i32) -> PType {
        PType::new(AtomicType::s(), z)
    }
    fn c(text: &str) -> Category {
        Category::parse(text).unwrap()
    }

    #[test]
    fn category_images() {
        assert_eq!(cat_to_typeseq(&c("NP/N")).unwrap(), TypeSeq(vec![n(0), n(-1)]));
        assert_eq!(cat_to_typeseq(&c("(S\\NP)/NP")).unwrap(), TypeSeq(vec![n(1), s(0), n(-1)]));
        assert_eq!(
            cat_to_typeseq(&c("((S\\NP)\\(S\\NP))/NP")).unwrap(),
            TypeSeq(vec![s(1), n(2), n(1), s(0), n(-1)])
        );
        assert_eq!(cat_to_typeseq(&c("S[dcl]")).unwrap(), TypeSeq(vec![s(0)]));
        assert_eq!(cat_to_typeseq(&c("PP")).unwrap(), TypeSeq(vec![n(0)]));
        assert!(cat_to_typeseq(&c("conj")).is_err());
        assert!(cat_to_typeseq(&c("PR")).is_err());
    }

    #[test]
    fn a_flower() {
        let t = parse_derivation("(<T NP 0 2> (<L NP/N DT DT a NP/N>) (<L N NN NN flower N>))", 1).unwrap();
        let d = tree_to_diagram(&t).unwrap();
        assert_eq!(d.cod(), &TypeSeq(vec![n(0)]));
        let gens: Vec<&Generator> = d.layers().iter().map(|l| &l.generator).collect();
        assert_eq!(gens[0], &Generator::word("a", TypeSeq(vec![n(0), n(-1)])));
        assert_eq!(gens[1], &Generator::word("flower", TypeSeq(vec![n(0)])));
        assert_eq!(gens[2], &Generator::cup(AtomicType::n(), -1));
        assert_eq!(d.layers()[2].offset, 1);
        assert_eq!(d.len(), 3);
    }

    pub(crate) const JOHN_GAVE: &str = "(<T S[dcl] 0 2> (<L NP NNP NNP John NP>) (<T S[dcl]\\NP 0 2> (<T (S[dcl]\\NP)/NP 0 2> (<L ((S[dcl]\\NP)/NP)/NP VBD VBD gave ((S[dcl]\\NP)/NP)/NP>) (<L NP NNP NNP Mary NP>) ) (<T NP 0 2> (<L NP/N DT DT a NP/N>) (<L N NN NN flower N>) ) ) )";

    #[test]
    fn john_gave_mary_a_flower() {
        let t = parse_derivation(JOHN_GAVE, 1).unwrap();
        let d = tree_to_diagram(&t).unwrap();
        assert_eq!(d.cod(), &TypeSeq(vec![s(0)]));
        assert_eq!(d.count_kind("word"), 5);
        assert_eq!(d.count_kind("cup"), 4);
        let gave = d.words().nth(1).unwrap();
        assert_eq!(gave.cod(), TypeSeq(vec![n(1), s(0), n(-1), n(-1)]));
        let flat: TypeSeq = d.words().flat_map(|w| w.cod().0).collect();
        assert_eq!(flat.reduce(), TypeSeq(vec![s(0)]));
    }

    #[test]
    fn leaf_only() {
        let t = CcgTree::leaf("hello", c("N"));
        let d = tree_to_diagram(&t).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.cod(), &TypeSeq(vec![n(0)]));
    }

    #[test]
    fn type_raising_uses_caps() {
        // John likes : S/NP via type raising and forward composition
        let line = "(<T S[dcl]/NP 0 2> (<T S/(S\\NP) 0 1> (<L NP NNP NNP John NP>) ) (<L (S[dcl]\\NP)/NP VBZ VBZ likes (S[dcl]\\NP)/NP>) )";
        let t = parse_derivation(line, 1).unwrap();
        let d = tree_to_diagram(&t).unwrap();
        assert_eq!(d.cod(), &cat_to_typeseq(&c("S/NP")).unwrap());
        assert_eq!(d.count_kind("cap"), 1);
        assert_eq!(d.normal_form().count_kind("cap"), 0);
        assert!(d.check().is_ok());
    }

    #[test]
    fn crossed_composition_uses_swaps() {
        let fx = CcgTree::node(
            c("(S\\NP)\\NP"),
            vec![CcgTree::leaf("a", c("(S\\NP)/NP")), CcgTree::leaf("b", c("NP\\NP"))],
        )
        .unwrap();
        let d = tree_to_diagram(&fx).unwrap();
        assert_eq!(d.cod(), &cat_to_typeseq(&c("(S\\NP)\\NP")).unwrap());
        assert!(d.count_kind("swap") > 0);

        let bx = CcgTree::node(
            c("(S\\NP)/NP"),
            vec![CcgTree::leaf("a", c("(S\\NP)/NP")), CcgTree::leaf("b", c("(S\\NP)\\(S\\NP)"))],
        )
        .unwrap();
        let d = tree_to_diagram(&bx).unwrap();
        assert_eq!(d.cod(), &cat_to_typeseq(&c("(S\\NP)/NP")).unwrap());
        assert!(d.count_kind("swap") > 0);
    }

    #[test]
    fn punctuation_and_coordination() {
        let line = "(<T S[dcl] 0 2> (<T S[dcl] 1 2> (<T NP 0 2> (<T NP 0 1> (<L N NNS NNS cats N>) ) (<T NP[conj] 1 2> (<L conj CC CC and conj>) (<T NP 0 1> (<L N NNS NNS dogs N>) ) ) ) (<L S[dcl]\\NP VBP VBP play S[dcl]\\NP>) ) (<L . . . . .>) )";
        let t = parse_derivation(line, 1).unwrap();
        let d = tree_to_diagram(&t).unwrap();
        assert_eq!(d.cod(), &TypeSeq(vec![s(0)]));
        let and = d.words().nth(1).unwrap();
        assert_eq!(and.cod(), TypeSeq(vec![n(1), n(0), n(-1)]));
        let stop = d.words().nth(4).unwrap();
        assert_eq!(stop.cod(), TypeSeq(vec![s(1), s(0)]));
    }

    #[test]
    fn type_changing_unary_inserts_bridge() {
        let t = CcgTree::node(c("NP\\NP"), vec![CcgTree::leaf("made", c("S[pss]\\NP"))]).unwrap();
        let d = tree_to_diagram(&t).unwrap();
        assert_eq!(d.cod(), &TypeSeq(vec![n(1), n(0)]));
        assert!(d.words().any(|w| matches!(w, Generator::Word { token, .. } if token == LEX_TOKEN)));
    }

    #[test]
    fn incompatible_children_fail() {
        let t = CcgTree::with_rule(
            c("NP"),
            Rule::FA,
            vec![CcgTree::leaf("a", c("NP/N")), CcgTree::leaf("b", c("S"))],
        )
        .unwrap();
        assert!(matches!(tree_to_diagram(&t), Err(crate::Error::Derivation(_))));
    }

    use proptest::prelude::*;

    fn category() -> impl Strategy<Value = Category> {
        let leaf = prop_oneof![Just(Category::atom("N")), Just(Category::atom("NP")), Just(Category::atom("S"))];
        leaf.prop_recursive(3, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Category::fwd(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Category::bwd(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn application_is_compositional(x in category(), y in category()) {
            let tx = cat_to_typeseq(&x).unwrap();
            let ty = cat_to_typeseq(&y).unwrap();
            let f = cat_to_typeseq(&Category::fwd(x.clone(), y.clone())).unwrap();
            prop_assert!(f.concat(&ty).reduces_to(&tx));
            let b = cat_to_typeseq(&Category::bwd(x.clone(), y.clone())).unwrap();
            prop_assert!(ty.concat(&b).reduces_to(&tx));

            // and the converter agrees
            let fa = CcgTree::node(x.clone(), vec![CcgTree::leaf("f", Category::fwd(x.clone(), y.clone())), CcgTree::leaf("a", y.clone())]).unwrap();
            let d = tree_to_diagram(&fa).unwrap();
            prop_assert!(d.check().is_ok());
            prop_assert_eq!(d.cod(), &tx);
        }
    }
}
