#pragma once

#include "dualk/anchors.hpp"
#include "dualk/avica.hpp"
#include "dualk/classifier.hpp"
#include "dualk/csv.hpp"
#include "dualk/error.hpp"
#include "dualk/feature.hpp"
#include "dualk/ipca.hpp"
#include "dualk/kernel.hpp"
#include "dualk/levelset.hpp"
#include "dualk/persistence.hpp"
#include "dualk/poly_ring.hpp"
#include "dualk/rng.hpp"
#include "dualk/synthetic.hpp"
#include "dualk/tsvd.hpp"
#include "dualk/types.hpp"
