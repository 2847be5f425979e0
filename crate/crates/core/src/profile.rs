//! Voter profiles and their JSON form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::{PolicySet, PreferenceOrder};

/// One order per voter, all over a shared [`PolicySet`].
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    policies: PolicySet,
    voters: Vec<(String, PreferenceOrder)>,
}

#[derive(Serialize, Deserialize)]
struct ProfileDoc {
    policies: Vec<String>,
    voters: Vec<VoterDoc>,
}

#[derive(Serialize, Deserialize)]
struct VoterDoc {
    id: String,
    ranking: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    completed: bool,
}

impl Profile {
    pub fn new(policies: PolicySet, voters: Vec<(String, PreferenceOrder)>) -> Result<Self> {
        if voters.is_empty() {
            return Err(Error::NoVoters);
        }
        let mut ids = std::collections::HashSet::new();
        for (id, order) in &voters {
            if !ids.insert(id.as_str()) {
                return Err(Error::DuplicateLabel(id.clone()));
            }
            if order.policies() != &policies {
                return Err(Error::ForeignPolicySet(id.clone()));
            }
        }
        Ok(Profile { policies, voters })
    }

    /// Build from shorthand orders like `"w>x>y>z"`; voters are named by
    /// their position.
    pub fn from_shorthand(policies: &[&str], orders: &[&str]) -> Result<Self> {
        let ps = PolicySet::new(policies.iter().copied())?;
        let voters = orders
            .iter()
            .enumerate()
            .map(|(i, o)| Ok((format!("v{}", i + 1), crate::order::parse_order(o, Some(&ps))?)))
            .collect::<Result<Vec<_>>>()?;
        Profile::new(ps, voters)
    }

    pub fn policies(&self) -> &PolicySet {
        &self.policies
    }

    pub fn voters(&self) -> &[(String, PreferenceOrder)] {
        &self.voters
    }

    pub fn orders(&self) -> impl Iterator<Item = &PreferenceOrder> {
        self.voters.iter().map(|(_, o)| o)
    }

    pub fn voter_count(&self) -> usize {
        self.voters.len()
    }

    /// Partial ballots are completed with a bottom tie-group; the voter
    /// record keeps a `completed` flag.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ProfileDoc = serde_json::from_str(text)?;
        let ps = PolicySet::new(doc.policies)?;
        let voters = doc
            .voters
            .into_iter()
            .map(|v| {
                let mut order = PreferenceOrder::completed_from(&ps, &v.ranking)?;
                order.mark_completed(v.completed);
                Ok((v.id, order))
            })
            .collect::<Result<Vec<_>>>()?;
        Profile::new(ps, voters)
    }

    pub fn to_json(&self) -> String {
        let doc = ProfileDoc {
            policies: self.policies.labels().to_vec(),
            voters: self
                .voters
                .iter()
                .map(|(id, o)| VoterDoc {
                    id: id.clone(),
                    ranking: o.group_labels(),
                    completed: o.was_completed(),
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("profile serializes")
    }

    /// The same voters with every order restricted to `keep`.
    pub fn restrict(&self, keep: &[&str]) -> Result<Profile> {
        let ps = self.policies.restrict(keep)?;
        let voters = self
            .voters
            .iter()
            .map(|(id, o)| {
                let groups: Vec<Vec<String>> = o
                    .group_labels()
                    .into_iter()
                    .map(|g| g.into_iter().filter(|l| ps.index_of(l).is_some()).collect::<Vec<_>>())
                    .filter(|g| !g.is_empty())
                    .collect();
                Ok((id.clone(), crate::order::make_order(&ps, &groups)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Profile::new(ps, voters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_and_completion() {
        let text = r#"{"policies":["w","x","y","z"],"voters":[
            {"id":"i","ranking":[["w"],["x"],["y"],["z"]]},
            {"id":"k","ranking":[["y"]]}]}"#;
        let p = Profile::from_json(text).unwrap();
        assert_eq!(p.voter_count(), 2);
        assert!(!p.voters()[0].1.was_completed());
        assert!(p.voters()[1].1.was_completed());
        assert_eq!(p.voters()[1].1.to_string(), "y>w=x=z");
        let again = Profile::from_json(&p.to_json()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn empty_and_bad_profiles() {
        assert_eq!(
            Profile::from_json(r#"{"policies":["a"],"voters":[]}"#).unwrap_err(),
            Error::NoVoters
        );
        assert!(matches!(
            Profile::from_json(r#"{"policies":["a"],"voters":[{"id":"1","ranking":[["b"]]}]}"#),
            Err(Error::UnknownLabel(_))
        ));
        assert!(matches!(Profile::from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn restriction_drops_policies() {
        let p = Profile::from_shorthand(&["w", "x", "y", "z"], &["w>x>y>z", "y>z>x>w"]).unwrap();
        let r = p.restrict(&["w", "y", "z"]).unwrap();
        assert_eq!(r.voters()[1].1.to_string(), "y>z>w");
    }
}
