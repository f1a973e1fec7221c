#pragma once

#include "cpgeo/catalog.hpp"
#include "cpgeo/classification.hpp"
#include "cpgeo/exterior.hpp"
#include "cpgeo/manifest.hpp"
#include "cpgeo/patch.hpp"
#include "cpgeo/polarization.hpp"
#include "cpgeo/report_json.hpp"
#include "cpgeo/riemann.hpp"
#include "cpgeo/structure.hpp"
#include "cpgeo/verifier.hpp"
