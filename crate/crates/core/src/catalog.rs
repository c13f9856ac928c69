//! Built-in fixtures, addressable by `@name`.

use serde::Serialize;

use crate::format::parse_system;
use crate::sphere::ArcSystem;

#[derive(Clone, Debug, Serialize)]
pub struct Fixture {
    pub name: &'static str,
    pub system: ArcSystem,
    pub provenance_note: &'static str,
}

const DELTA_85: &str = "\
bridge-arc-system v1
system delta85
arc 1 3 6 L
events 1 : 1@4 3@4 5@5 3@10 4@2 5@1 3@8 5@7 1@1
arc 2 2 4 U
events 2 : 3@2 1@2 3@6 5@3
arc 3 1 5 L
events 3 : 5@8 3@7 5@2 4@1 3@11 5@4 3@5 1@3 3@1 2@1 1@5 3@3 5@6 3@9
end
";

const DELTA_85_NOTE: &str = "\
Bridge arcs of the far tangle of a 3-bridge presentation of 8_5, the pretzel \
knot P(3,3,2). The tangle is the image of the reference tangle under the \
three twist regions sigma(s2)^3 sigma(s4)^2 sigma(s6)^3 (positive half \
twists), which joins the caps 12|34|56 into P(3,3,2). Of the tangle's arc \
systems, this one is the image of the depth-2 rewiring of epsilon \
{12: 4@2; 34: -; 56 (L): 1@2 2@1 4@1 1@1}; it was chosen as the smallest \
image in which arcs 2 and 3 have no subarc joining epsilon_1 and epsilon_3 \
away from epsilon_2 while arc 1 joins every pair. The indexing is the \
identity (no permutation). The diagram with these arcs over epsilon has \
Fox determinant 21.";

const RC_POSITIVE_A: &str = "\
bridge-arc-system v1
system rc-positive-A
arc 1 3 6 L
events 1 : 1@2 4@1 3@4 1@4 2@1 3@2 4@3
arc 2 2 4 U
events 2 : 3@3 4@2 1@1 3@1 2@2 1@3
arc 3 1 5 L
events 3 :
end
";

const RC_POSITIVE_B: &str = "\
bridge-arc-system v1
system rc-positive-B
arc 1 2 4 U
events 1 : 5@7 2@7
arc 2 5 6 L
events 2 : 3@3 2@8 5@6 2@1 6@2 5@9 2@5 5@2 3@1 2@10 5@4 2@3
arc 3 1 3 U
events 3 : 5@8 2@6 5@1 3@2 2@9 5@5 2@2 6@1 5@10 2@4 5@3
end
";

const RC_POSITIVE_NOTE: &str = "\
A pair satisfying the rectangle condition on all nine tuples, found by a \
seeded hill-climb over random half-twist words applied to epsilon and frozen. \
Both rectangle algorithms report 9/9.";

pub const NAMES: [&str; 4] = ["epsilon", "delta85", "rc-positive-A", "rc-positive-B"];

/// Looks up a fixture by name, with or without the leading `@`.
pub fn fixture(name: &str) -> Option<Fixture> {
    let name = name.strip_prefix('@').unwrap_or(name);
    let parsed = |text: &str| parse_system(text).expect("built-in fixture is valid");
    let (name, system, provenance_note) = match name {
        "epsilon" => ("epsilon", ArcSystem::epsilon(), "The reference system: epsilon_i is the Upper chord over s_(2i-1)."),
        "delta85" => ("delta85", parsed(DELTA_85), DELTA_85_NOTE),
        "rc-positive-A" => ("rc-positive-A", parsed(RC_POSITIVE_A), RC_POSITIVE_NOTE),
        "rc-positive-B" => ("rc-positive-B", parsed(RC_POSITIVE_B), RC_POSITIVE_NOTE),
        _ => return None,
    };
    Some(Fixture { name, system, provenance_note })
}

pub fn epsilon() -> ArcSystem {
    ArcSystem::epsilon()
}

pub fn delta85() -> ArcSystem {
    fixture("delta85").expect("built in").system
}

pub fn rc_positive_pair() -> (ArcSystem, ArcSystem) {
    (fixture("rc-positive-A").expect("built in").system, fixture("rc-positive-B").expect("built in").system)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_loads_and_is_canonical() {
        for name in NAMES {
            let f = fixture(&format!("@{name}")).unwrap();
            assert_eq!(f.name, name);
            assert!(f.system.is_canonical(), "{name}");
        }
        assert!(fixture("@nope").is_none());
    }
}
