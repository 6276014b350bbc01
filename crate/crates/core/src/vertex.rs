//! Everything derived for one truss vertex: curves, labels, Connectors and
//! the split Connector.

use crate::curves::{build_curves, validate_separation, CurveParams, SiteCurve};
use crate::elements::EndGeometry;
use crate::geometry::{TorusSpec, VoxelGrid};
use crate::interlock::{Assembly, Piece};
use crate::split::{split_connector, SplitConnector, SplitSpec};
use crate::voronoi::{check_connectivity, extract_regions, label_voxels, ConnectorRegion, LabelField};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct VertexParams {
    pub torus: TorusSpec,
    pub curves: CurveParams,
    pub split: SplitSpec,
    /// Voxels per cross-section side.
    pub resolution: usize,
    /// Smallest allowed distance between two site curves.
    pub min_separation: f64,
    /// Depth of the tube contact band checked under each Connector end.
    pub attachment_depth: f64,
}

impl VertexParams {
    pub fn defaults(torus: TorusSpec, valence: usize, resolution: usize) -> Self {
        let s = torus.side();
        Self {
            curves: CurveParams::defaults(valence, &torus),
            split: SplitSpec::defaults(&torus),
            resolution,
            min_separation: 0.05 * s,
            attachment_depth: s / 8.0,
            torus,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VertexDesign {
    pub params: VertexParams,
    pub grid: VoxelGrid,
    pub curves: Vec<SiteCurve>,
    pub field: LabelField,
    pub regions: Vec<ConnectorRegion>,
    pub split: SplitConnector,
}

impl VertexDesign {
    pub fn build(params: VertexParams) -> Result<Self> {
        let t = &params.torus;
        let curves = build_curves(&params.curves, t)?;
        validate_separation(&curves, params.min_separation)?;
        let grid = VoxelGrid::for_torus(t, params.resolution)?;
        let field = label_voxels(&curves, t, &grid)?;
        let regions = extract_regions(&field);
        for r in &regions {
            let parts = check_connectivity(r);
            if parts != 1 {
                return Err(Error::InvalidCurveParams(format!(
                    "Connector {} has {parts} components",
                    r.label
                )));
            }
        }
        let target = regions.get(params.split.target_label).ok_or_else(|| {
            Error::Config(format!("split target {} has no region", params.split.target_label))
        })?;
        let split = split_connector(target, &params.split, params.curves.valence, t, &grid)?;
        Ok(Self { params, grid, curves, field, regions, split })
    }

    pub fn valence(&self) -> usize {
        self.params.curves.valence
    }

    pub fn connector_id(label: usize) -> String {
        format!("connector_{label}")
    }

    /// All `n` Connectors intact.
    pub fn unsplit_assembly(&self) -> Result<Assembly> {
        Assembly::new(
            self.regions
                .iter()
                .map(|r| Piece::new(Self::connector_id(r.label), r.voxels.clone()))
                .collect(),
        )
    }

    /// Peg, halves, then the intact Connectors in label order.
    pub fn split_assembly(&self) -> Result<Assembly> {
        let mut pieces = vec![
            Piece::new("peg", self.split.peg.clone()),
            Piece::new("half_a", self.split.half_a.clone()),
            Piece::new("half_b", self.split.half_b.clone()),
        ];
        pieces.extend(
            self.regions
                .iter()
                .filter(|r| r.label != self.split.label)
                .map(|r| Piece::new(Self::connector_id(r.label), r.voxels.clone())),
        );
        Assembly::new(pieces)
    }

    /// Connector of label 0 and the peg, checked for tube attachment.
    pub fn end_geometry(&self) -> Result<EndGeometry> {
        if self.split.label != 0 {
            return Err(Error::Config("tube-mounted ends need the split on label 0".into()));
        }
        EndGeometry::new(
            &self.field,
            self.regions[0].voxels.clone(),
            self.split.peg.clone(),
            &self.params.torus,
            self.params.attachment_depth,
        )
    }
}
