#pragma once

#include "scenelint/builder.hpp"
#include "scenelint/errors.hpp"
#include "scenelint/gateway.hpp"
#include "scenelint/geometry.hpp"
#include "scenelint/io.hpp"
#include "scenelint/ontology.hpp"
#include "scenelint/params.hpp"
#include "scenelint/refine.hpp"
#include "scenelint/report.hpp"
#include "scenelint/scene.hpp"
#include "scenelint/tuning.hpp"
#include "scenelint/verifiers.hpp"
