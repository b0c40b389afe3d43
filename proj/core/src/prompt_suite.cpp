#include <array>

#include "plantext/pipeline.hpp"
#include "plantext/rng.hpp"

namespace plantext {

namespace {

using C = AnnotationCategory;

// Published evaluation prompts, verbatim. Known oddities kept on purpose:
// AN.3/AN.5 and AP.3/AP.5 repeat each other, RS.3 says "one bathrooms",
// RS.8 says "three bedroom", and LU.7/LU.15 say "west east".
const std::array<SuitePrompt, 58> kSuite = {{
    {"AN.1", "the bedroom is not adjacent to the living room", C::AN},
    {"AN.2", "a bedroom is not adjacent to the living room", C::AN},
    {"AN.3", "the bedroom is not adjacent to the kitchen", C::AN},
    {"AN.4", "a bedroom is not adjacent to the kitchen", C::AN},
    {"AN.5", "the bedroom is not adjacent to the kitchen", C::AN},
    {"AN.6", "the kitchen is not adjacent to the bathroom", C::AN},
    {"AN.7", "a bathroom is not adjacent to the living room", C::AN},
    {"AN.8", "the bathroom is not adjacent to the living room", C::AN},
    {"AP.1", "the bedroom is adjacent to the living room", C::AP},
    {"AP.2", "a bedroom is adjacent to the living room", C::AP},
    {"AP.3", "the bedroom is adjacent to the kitchen", C::AP},
    {"AP.4", "a bedroom is adjacent to the kitchen", C::AP},
    {"AP.5", "the bedroom is adjacent to the kitchen", C::AP},
    {"AP.6", "the kitchen is adjacent to the bathroom", C::AP},
    {"AP.7", "a bathroom is adjacent to the living room", C::AP},
    {"AP.8", "the bathroom is adjacent to the living room", C::AP},
    {"LNU.1", "a bedroom is in the north side of the house", C::LNU},
    {"LNU.2", "a bedroom is in the north east side of the house", C::LNU},
    {"LNU.3", "a bedroom is in the east side of the house", C::LNU},
    {"LNU.4", "a bedroom is in the south east side of the house", C::LNU},
    {"LNU.5", "a bedroom is in the south side of the house", C::LNU},
    {"LNU.6", "a bedroom is in the south west side of the house", C::LNU},
    {"LNU.7", "a bedroom is in the west side of the house", C::LNU},
    {"LNU.8", "a bedroom is in the north west side of the house", C::LNU},
    {"LU.1", "the bedroom is in the north side of the house", C::LU},
    {"LU.2", "the bedroom is in the north east side of the house", C::LU},
    {"LU.3", "the bedroom is in the east side of the house", C::LU},
    {"LU.4", "the bedroom is in the south east side of the house", C::LU},
    {"LU.5", "the bedroom is in the south side of the house", C::LU},
    {"LU.6", "the bedroom is in the south west side of the house", C::LU},
    {"LU.7", "the bedroom is in the west east side of the house", C::LU},
    {"LU.8", "the bedroom is in the north west side of the house", C::LU},
    {"LU.9", "the kitchen is in the north side of the house", C::LU},
    {"LU.10", "the kitchen is in the north east side of the house", C::LU},
    {"LU.11", "the kitchen is in the east side of the house", C::LU},
    {"LU.12", "the kitchen is in the south east side of the house", C::LU},
    {"LU.13", "the kitchen is in the south side of the house", C::LU},
    {"LU.14", "the kitchen is in the south west side of the house", C::LU},
    {"LU.15", "the kitchen is in the west east side of the house", C::LU},
    {"LU.16", "the kitchen is in the north west side of the house", C::LU},
    {"RG.1", "a house with five rooms", C::RG},
    {"RG.2", "a house with six rooms", C::RG},
    {"RG.3", "a house with seven rooms", C::RG},
    {"RG.4", "a house with eight rooms", C::RG},
    {"RG.5", "a house with nine rooms", C::RG},
    {"RG.6", "a house with ten rooms", C::RG},
    {"RS.1", "a house with one bedroom and one bathroom", C::RS},
    {"RS.2*", "a house with one bedroom and two bathrooms", C::RS},
    {"RS.3", "a house with two bedrooms and one bathrooms", C::RS},
    {"RS.4", "a house with two bedrooms and two bathrooms", C::RS},
    {"RS.5", "a house with two bedrooms and three bathrooms", C::RS},
    {"RS.6", "a house with three bedrooms and one bathroom", C::RS},
    {"RS.7", "a house with three bedrooms and two bathrooms", C::RS},
    {"RS.8*", "a house with three bedroom and three bathrooms", C::RS},
    {"RS.9*", "a house with four bedrooms and one bathroom", C::RS},
    {"RS.10", "a house with four bedrooms and two bathrooms", C::RS},
    {"RS.11", "a house with four bedrooms and three bathrooms", C::RS},
    {"RS.12*", "a house with four bedrooms and four bathrooms", C::RS},
}};

}  // namespace

std::span<const SuitePrompt> prompt_suite() { return kSuite; }

std::uint64_t prompt_suite_digest() {
    std::string all;
    for (const SuitePrompt& p : kSuite) {
        all += p.id;
        all += '\t';
        all += p.text;
        all += '\t';
        all += to_string(p.category);
        all += '\n';
    }
    return fnv1a64(all);
}

}  // namespace plantext
