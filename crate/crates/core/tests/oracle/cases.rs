// Generated by generate.py; do not edit.
const CASES: &[Case] = &[
    Case {
        label: "general 1.5/0.5 csiszar",
        family: "general",
        params: &[1.5, 0.5],
        form: "csiszar",
        variant: "plain",
        p: &[1.0, 2.0],
        q: &[2.0, 1.0],
        value: 0.7071067811865475244,
        neg_grad: &[-0.4696699141100893567, 1.1213203435596425732],
    },
    Case {
        label: "kaniadakis 0.5 bregman",
        family: "kaniadakis",
        params: &[0.5],
        form: "bregman",
        variant: "plain",
        p: &[1.0, 2.0, 3.0],
        q: &[2.0, 1.0, 0.5],
        value: 3.7015384822142127548,
        neg_grad: &[-0.61871843353822908385, 1.0, 4.4194173824159220275],
    },
    Case {
        label: "tsallis 2 bregman nominal",
        family: "tsallis",
        params: &[2.0],
        form: "bregman",
        variant: "nominal",
        p: &[1.0, 2.0, 3.0],
        q: &[2.0, 1.0, 0.5],
        value: 8.2380952380952380952,
        neg_grad: &[-2.2947845804988662132, 1.9954648526077097506, 5.1882086167800453515],
    },
    Case {
        label: "shannon csiszar",
        family: "shannon",
        params: &[],
        form: "csiszar",
        variant: "plain",
        p: &[0.5, 1.5, 4.0],
        q: &[1.0, 2.0, 3.0],
        value: 0.37263159084947966389,
        neg_grad: &[-0.5, -0.25, 0.33333333333333333333],
    },
    Case {
        label: "tsallis 0.5 csiszar-dual",
        family: "tsallis",
        params: &[0.5],
        form: "csiszar-dual",
        variant: "plain",
        p: &[0.5, 1.5, 4.0],
        q: &[1.0, 2.0, 3.0],
        value: 0.19348159221364119003,
        neg_grad: &[-0.2928932188134524756, -0.13397459621556135324, 0.15470053837925152902],
    },
    Case {
        label: "abe 1.4 csiszar-dual reference",
        family: "abe",
        params: &[1.4],
        form: "csiszar-dual",
        variant: "reference",
        p: &[0.5, 1.5, 4.0],
        q: &[1.0, 2.0, 3.0],
        value: 0.46345770045312943872,
        neg_grad: &[-0.74475213811609019545, -0.23645994568986452143, 0.40589067649860641277],
    },
    Case {
        label: "gamma 0.2 csiszar",
        family: "gamma",
        params: &[0.2],
        form: "csiszar",
        variant: "plain",
        p: &[0.5, 1.5, 4.0],
        q: &[1.0, 2.0, 3.0],
        value: 0.44027763772592694767,
        neg_grad: &[-0.55593084641542781848, -0.2895434252462960978, 0.41688791208324486838],
    },
    Case {
        label: "kls 0.4/0.1 bregman",
        family: "kls",
        params: &[0.4, 0.1],
        form: "bregman",
        variant: "plain",
        p: &[0.5, 1.5, 4.0],
        q: &[1.0, 2.0, 3.0],
        value: 0.55903467722818329694,
        neg_grad: &[-0.6, -0.38476036719207210823, 0.6041978980311997863],
    },
    Case {
        label: "kls 0.3/-0.2 bregman-dual reference",
        family: "kls",
        params: &[0.3, -0.2],
        form: "bregman-dual",
        variant: "reference",
        p: &[0.5, 1.5, 4.0],
        q: &[1.0, 2.0, 3.0],
        value: 0.23240486641029687296,
        neg_grad: &[-0.4030888813625961642, -0.082018047650597368276, 0.18904165888793030025],
    },
    Case {
        label: "newton bregman-dual",
        family: "newton",
        params: &[],
        form: "bregman-dual",
        variant: "plain",
        p: &[0.5, 1.5, 4.0],
        q: &[1.0, 2.0, 3.0],
        value: 0.95273255405408219099,
        neg_grad: &[-0.84657359027997265471, -0.64384103622589046372, 1.1438410362258904637],
    },
    Case {
        label: "newton csiszar",
        family: "newton",
        params: &[],
        form: "csiszar",
        variant: "plain",
        p: &[0.5, 1.5, 4.0],
        q: &[1.0, 2.0, 3.0],
        value: 0.54048246209140649861,
        neg_grad: &[-0.625, -0.34375, 0.55555555555555555556],
    },
    Case {
        label: "alpha 0.3 csiszar-dual",
        family: "alpha",
        params: &[0.3],
        form: "csiszar-dual",
        variant: "plain",
        p: &[0.5, 1.5, 4.0],
        q: &[1.0, 2.0, 3.0],
        value: 0.39635634289071777418,
        neg_grad: &[-0.64130214015574155448, -0.27955827207512282148, 0.29438158526825287134],
    },
    Case {
        label: "alpha -0.25 csiszar",
        family: "alpha",
        params: &[-0.25],
        form: "csiszar",
        variant: "plain",
        p: &[0.5, 1.5, 4.0],
        q: &[1.0, 2.0, 3.0],
        value: 0.37482194673728845411,
        neg_grad: &[-0.51471862576142970719, -0.25386608210715367185, 0.32646029847617125005],
    },
    Case {
        label: "tsallis 0.5 csiszar nominal",
        family: "tsallis",
        params: &[0.5],
        form: "csiszar",
        variant: "nominal",
        p: &[0.5, 1.5, 4.0],
        q: &[1.0, 2.0, 3.0],
        value: 0.19192179527507761757,
        neg_grad: &[-0.27230726509169253919, -0.11595096150485464298, 0.16806972936713394172],
    },
    Case {
        label: "tsallis 1.7 csiszar-dual nominal",
        family: "tsallis",
        params: &[1.7],
        form: "csiszar-dual",
        variant: "nominal",
        p: &[0.5, 1.5, 4.0],
        q: &[1.0, 2.0, 3.0],
        value: 0.67581482732327250055,
        neg_grad: &[-1.0648928817443311036, -0.26924401858847859008, 0.53446030630709609459],
    },
    Case {
        label: "tsallis 3 bregman-dual nominal",
        family: "tsallis",
        params: &[3.0],
        form: "bregman-dual",
        variant: "nominal",
        p: &[0.5, 1.5, 4.0],
        q: &[1.0, 2.0, 3.0],
        value: 3.6468325254903444913,
        neg_grad: &[-2.2066161745732997066, -6.5568023473035191281, 5.1067402897267793209],
    },
    Case {
        label: "general 0.3/2.2 bregman reference",
        family: "general",
        params: &[0.3, 2.2],
        form: "bregman",
        variant: "reference",
        p: &[0.5, 1.5, 4.0],
        q: &[1.0, 2.0, 3.0],
        value: 1.278782511977098184,
        neg_grad: &[-1.2273085565600202064, -1.2923608562686466598, 1.2706767563657711753],
    },
];
