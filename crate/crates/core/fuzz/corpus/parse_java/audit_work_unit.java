package org.hibernate.envers.synchronization.work;

import java.io.Serializable;
import java.util.Map;

import org.hibernate.Session;

public interface AuditWorkUnit extends WorkUnitMergeDispatcher {
    Object getEntityId();
    String getEntityName();
    boolean containsWork();
    boolean isPerformed();
    void perform(Session session, Object revisionData);
    void undo(Session session);
    Map<String, Object> generateData(Object revisionData);
    Serializable getId();
}
