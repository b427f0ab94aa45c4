//! Instance files: a graph plus a location profile, as JSON with exact
//! fraction-string numerics. Parsing canonicalizes (vertex ids become
//! strings, offsets reduce, vertex-coincident offsets collapse to the
//! vertex form), after which serialize/parse round-trips are
//! byte-identical.

use netloc::graph::{LocationProfile, MetricGraph};
use netloc::Error;
use serde_json::{json, Value};

#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: MetricGraph,
    pub profile: LocationProfile,
}

impl Instance {
    pub fn from_json(value: &Value) -> Result<Instance, Error> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("instance must be an object".into()))?;
        let graph_json = obj
            .get("graph")
            .ok_or_else(|| Error::Parse("instance needs a \"graph\"".into()))?;
        let graph = MetricGraph::from_json(graph_json)?;
        let profile_json = obj
            .get("profile")
            .ok_or_else(|| Error::Parse("instance needs a \"profile\"".into()))?;
        let profile = LocationProfile::from_json(&graph, profile_json)?;
        profile.validate_on(&graph)?;
        Ok(Instance { graph, profile })
    }

    pub fn from_json_str(text: &str) -> Result<Instance, Error> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
        Instance::from_json(&value)
    }

    pub fn load(path: &std::path::Path) -> Result<Instance, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        Instance::from_json_str(&text)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "graph": self.graph.to_json(),
            "profile": self.profile.to_json(&self.graph),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_canonicalize_round_trip() {
        let text = r#"{
            "graph": {
                "vertices": [0, 1, 2],
                "edges": [
                    {"u": 0, "v": 1, "length": "1/2"},
                    {"u": 1, "v": 2, "length": 2}
                ]
            },
            "profile": [
                {"edge": 0, "offset": "1/4"},
                {"edge": 1, "offset": "0"},
                {"vertex": 2}
            ]
        }"#;
        let inst = Instance::from_json_str(text).unwrap();
        let once = serde_json::to_string(&inst.to_json()).unwrap();
        let again =
            serde_json::to_string(&Instance::from_json_str(&once).unwrap().to_json()).unwrap();
        assert_eq!(once, again);
        // Offset 0 collapsed to the vertex form.
        assert!(once.contains("\"vertex\":\"1\""));
    }

    #[test]
    fn circle_profiles_accept_bare_positions() {
        let text = r#"{
            "graph": {
                "vertices": ["a", "b"],
                "edges": [
                    {"u": "a", "v": "b", "length": "1/2"},
                    {"u": "b", "v": "a", "length": "1/2"}
                ]
            },
            "profile": ["0", "3/10", "11/20"]
        }"#;
        let inst = Instance::from_json_str(text).unwrap();
        assert!(inst.graph.is_circle());
        assert_eq!(
            inst.graph.circle_position(inst.profile.point(2)).unwrap(),
            netloc::rational::rat(11, 20)
        );
    }

    #[test]
    fn bad_instances_are_parse_errors() {
        assert!(Instance::from_json_str("not json").is_err());
        assert!(Instance::from_json_str("{}").is_err());
        let missing_profile = r#"{"graph": {"vertices": ["a"], "edges": []}}"#;
        assert!(Instance::from_json_str(missing_profile).is_err());
    }
}
