package org.hibernate.envers.synchronization.work;

import java.io.Serializable;

public class AddWorkUnit extends AbstractAuditWorkUnit implements AuditWorkUnit {
    public AddWorkUnit(Serializable id) {
        super(id);
    }

    public boolean containsWork() {
        return true;
    }

    public AuditWorkUnit dispatch(WorkUnitMergeVisitor first) {
        return this;
    }
}
